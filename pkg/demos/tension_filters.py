"""Smoothing tension observations with the two Kalman models.

Run with ``python demos/tension_filters.py``.
"""

# %% [markdown]
# Each tension observation comes from IMU, attitude and thrust readings, so
# it is noisy. Two filters are available. The constant model treats the
# tension as a slow random walk. The derivative model also tracks the
# recent trend. We feed both a step in tension.

# %%
import numpy as np

from tethermav.kalman import KalmanConfig, filter_series

rng = np.random.default_rng(0)
n, k0, step = 10000, 2000, 0.1
truth = np.where(np.arange(n) >= k0, step, 0.0)
obs = np.repeat((truth + rng.normal(0.0, 0.02, n))[:, None], 3, axis=1)

# %%
for model in ("constant", "derivative"):
    cfg = KalmanConfig(model)
    out = filter_series(obs, cfg)[:, 0]
    rise = int(np.nonzero(out[k0:] >= 0.95 * step)[0][0])
    print(
        f"{model:>10}: q = {cfg.q_var:.0e}, 95% of step after {rise} samples, "
        f"steady variance {out[5000:].var():.2e} (raw {obs[5000:, 0].var():.2e})"
    )

# %% [markdown]
# With these defaults the derivative model responds sooner to the step and
# is also quieter once the tension has settled.
