"""Locating the vehicle from the tether force alone.

Run with ``python demos/localization.py``.
"""

# %% [markdown]
# The force the tether exerts on the vehicle fixes the catenary. The
# horizontal part gives the curve parameter ``a``. The vertical part gives
# the arc length from the lowest point. With the anchor known, that is
# enough to place the vehicle.

# %%
import math

from tethermav.catenary import TetherProperties
from tethermav.localization import AnchorPose, locate_from_tension, polar_to_cartesian
from tethermav.simkit import tether_force
from tethermav.tension import TensionVec

tether = TetherProperties(omega=0.0478, s_total=1.6)
anchor = AnchorPose(0.0, 0.0)

# %%
for true_pos in [(1.0, 0.0, 1.0), (0.6, 0.4, 0.8), (-0.3, 0.9, 0.5)]:
    force = tether_force(true_pos, anchor, tether)
    p = locate_from_tension(force, tether, anchor)
    est = polar_to_cartesian(p)
    err = math.dist(est, true_pos)
    print(f"true {true_pos}  force ({force.tx:+.4f}, {force.ty:+.4f}, {force.tz:+.4f}) N  error {err:.1e} m")

# %% [markdown]
# Before take-off the tether is slack and nothing pulls on the vehicle. The
# estimate then falls back to the whole tether hanging below the anchor.

# %%
p = locate_from_tension(TensionVec(0.0, 0.0, 0.0), tether, AnchorPose(0.0, 0.754))
print(f"zero tension: r = {p.r}, z = {p.z:.3f} m")
