"""Guiding the vehicle by pulling on its tether.

Run with ``python demos/tension_following.py``.
"""

# %% [markdown]
# In tension-following mode the vehicle holds its position until the
# estimated tether force exceeds a threshold. While it does, the position
# goal moves with the vehicle, so a person pulling the tether can lead it
# down. Below the landing height the motors stop.

# %%
import numpy as np

from tethermav.config import bundled_path, load_config
from tethermav.simkit import TRACE_COLUMNS, run_scenario, summarize

cfg = load_config(bundled_path("pull_and_land"))
result = run_scenario(cfg)
arr = result.array()
col = {name: i for i, name in enumerate(TRACE_COLUMNS)}

# %%
print("  t (s)    z (m)   |est| (N)  following  motors")
for t in (0.0, 4.0, 6.0, 8.0, 10.0, 12.0, 16.0, 19.9):
    row = arr[np.argmin(np.abs(arr[:, col["t"]] - t))]
    est = np.linalg.norm(row[[col["tx_est"], col["ty_est"], col["tz_est"]]])
    print(f"{row[col['t']]:6.1f}  {row[col['z']]:7.3f}  {est:9.4f}  {int(row[col['following']]):6d}  {int(row[col['motors_on']]):6d}")

# %%
s = summarize(result)
print(f"following {s['following']}, motors off {s['motors_off']}, final altitude {s['final_altitude']:.3f} m")

# %% [markdown]
# The same run from the shell: ``tethermav sim pull_and_land``.
