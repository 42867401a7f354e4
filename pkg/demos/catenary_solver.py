"""Solving for the shape of a hanging tether.

Run with ``python demos/catenary_solver.py``.
"""

# %% [markdown]
# A tether hangs between the ground anchor and the vehicle. Given both end
# points and the tether length, we want the catenary ``y = a cosh((x-x0)/a) + C``
# and the forces at each end.

# %%
import math

import numpy as np

from tethermav.catenary import (
    Point2,
    SolverSettings,
    TetherProperties,
    end_tensions,
    eval_height,
    initial_guess_a,
    solve_from_endpoints,
    solve_parameter_a,
    system_residuals,
)

tether = TetherProperties(omega=0.0478, s_total=1.6)
anchor, vehicle = Point2(0.0, 0.0), Point2(1.0, 0.5)
params = solve_from_endpoints(anchor, vehicle, tether)
print(f"a = {params.a:.6f}  x0 = {params.x0:.6f}  C = {params.C:.6f}")
print(f"arc from lowest point: {params.s1:.4f} m to the anchor, {params.s2:.4f} m to the vehicle")

# %% [markdown]
# The fit passes through both ends and has the requested length.

# %%
res = system_residuals(params, anchor, vehicle, tether)
print("residuals:", np.array2string(res, precision=2))
xs = np.linspace(anchor.x, vehicle.x, 6)
print("heights along the span:", np.round(eval_height(params, xs), 4))

# %% [markdown]
# The horizontal force is the same at both ends. The vertical force grows
# with the arc length between that end and the lowest point.

# %%
for side in ("origin", "uav"):
    t = end_tensions(params, tether, side)
    print(f"{side:>6}: H = {t.H:.5f} N  Tv = {t.Tv:+.5f} N  |T| = {t.mag:.5f} N")

# %% [markdown]
# Newton's method starts from a series-expansion guess. How good is that
# start as the tether gets slacker?

# %%
dx, dY = 0.5, 0.5
chord = math.hypot(2 * dx, dY)
print(" slack   guess      solved     iterations")
for ratio in (1.01, 1.1, 1.3, 1.6, 2.0):
    L = ratio * chord
    a0 = initial_guess_a(dx, dY, L)
    r = solve_parameter_a(dx, dY, L, SolverSettings(), a0=a0)
    print(f"{ratio:6.2f}  {a0:9.5f}  {r.a:9.5f}  {r.iterations:4d}")
