"""Kalman filters for the tether tension.

Two process models:

* ``constant`` - a 3-state random constant ``(Tx, Ty, Tz)`` with ``A = C = I``.
* ``derivative`` - per axis, a 3-sample history ``(T[k-2], T[k-1], T[k])``
  propagated by ``T[k+1] = T[k] + a*dT + b*d2T``.  The three axes run as
  independent filters, batched along the leading array dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .tension import TensionVec

Model = Literal["constant", "derivative"]

DEFAULT_Q = {"constant": 1e-6, "derivative": 5e-10}


@dataclass(frozen=True)
class KalmanConfig:
    """Filter settings.

    ``q_var`` defaults per model.  For the derivative model the process noise
    enters only the newest sample of each history; the two shift rows of the
    transition are exact.
    """

    model: Model = "constant"
    q_var: Optional[float] = None
    r_var: float = 1e-2
    deriv_a: float = 0.978
    deriv_b: float = -0.97
    x0: Optional[tuple] = None
    p0: float = 1.0

    def __post_init__(self):
        if self.model not in DEFAULT_Q:
            raise ValueError(f"unknown model {self.model!r}")
        if self.q_var is None:
            object.__setattr__(self, "q_var", DEFAULT_Q[self.model])
        if not self.q_var > 0:
            raise ValueError("q_var must be positive")
        if not self.r_var > 0:
            raise ValueError("r_var must be positive")
        if not self.p0 > 0:
            raise ValueError("p0 must be positive")

    @property
    def transition(self) -> np.ndarray:
        if self.model == "constant":
            return np.eye(3)
        a, b = self.deriv_a, self.deriv_b
        return np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [b, -(a + 2 * b), 1 + a + b]])

    @property
    def process_noise(self) -> np.ndarray:
        if self.model == "constant":
            return self.q_var * np.eye(3)
        return np.diag([0.0, 0.0, self.q_var])


@dataclass(frozen=True)
class KalmanState:
    """``xhat``/``p`` are (3,) and (3, 3) for the constant model, (3, 3) and
    (3, 3, 3) for the derivative model (leading index = axis)."""

    xhat: np.ndarray
    p: np.ndarray
    k_last: np.ndarray


def kalman_init(cfg: KalmanConfig) -> KalmanState:
    x0 = np.zeros(3) if cfg.x0 is None else np.asarray(cfg.x0, dtype=float)
    if cfg.model == "constant":
        return KalmanState(x0.copy(), cfg.p0 * np.eye(3), np.zeros(3))
    # each axis history starts flat at its initial tension
    xhat = np.repeat(x0[:, None], 3, axis=1)
    p = np.broadcast_to(cfg.p0 * np.eye(3), (3, 3, 3)).copy()
    return KalmanState(xhat, p, np.zeros((3, 3)))


def kalman_step(state: KalmanState, cfg: KalmanConfig, y) -> KalmanState:
    """One predict/update cycle for the observation ``y = (Tx, Ty, Tz)``."""
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise ValueError(f"non-finite observation {y}")
    A = cfg.transition
    Q = cfg.process_noise
    R = cfg.r_var

    if cfg.model == "constant":
        x = A @ state.xhat
        P = A @ state.p @ A.T + Q
        S = P + R * np.eye(3)
        K = np.linalg.solve(S, P).T
        x = x + K @ (y - x)
        IKC = np.eye(3) - K
        P = IKC @ P @ IKC.T + R * K @ K.T
        return KalmanState(x, 0.5 * (P + P.T), np.diag(K).copy())

    x = state.xhat @ A.T
    P = A @ state.p @ A.T + Q
    # observation picks the newest sample: C = [0, 0, 1]
    S = P[:, 2, 2] + R
    K = P[:, :, 2] / S[:, None]
    x = x + K * (y - x[:, 2])[:, None]
    IKC = np.broadcast_to(np.eye(3), (3, 3, 3)).copy()
    IKC[:, :, 2] -= K
    P = IKC @ P @ IKC.transpose(0, 2, 1) + R * K[:, :, None] * K[:, None, :]
    return KalmanState(x, 0.5 * (P + P.transpose(0, 2, 1)), K)


def estimate(state: KalmanState, cfg: KalmanConfig) -> TensionVec:
    if cfg.model == "constant":
        return TensionVec.from_array(state.xhat)
    return TensionVec.from_array(state.xhat[:, 2])


def filter_series(observations, cfg: KalmanConfig) -> np.ndarray:
    """Run the filter over an (N, 3) array of observations; returns (N, 3)."""
    obs = np.asarray(observations, dtype=float).reshape(-1, 3)
    out = np.empty_like(obs)
    state = kalman_init(cfg)
    for i, y in enumerate(obs):
        state = kalman_step(state, cfg, y)
        out[i] = estimate(state, cfg)
    return out
