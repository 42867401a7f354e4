"""Position and tension-driven flight behaviors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..catenary import TetherProperties
from ..localization import AnchorPose
from ..tension import Attitude, QuadParams, TensionVec
from .dynamics import QuadState, equilibrium_attitude, tether_force

MODES = ("position_hold", "tension_following", "tension_goal")

# thrust ceiling as a multiple of the vehicle's weight
_MAX_THRUST_RATIO = 3.0


@dataclass(frozen=True)
class Gains:
    kp_xy: float = 16.0
    kd_xy: float = 7.0
    kp_z: float = 36.0
    kd_z: float = 11.0
    # tension-goal mode: acceleration per newton of tension error, and damping
    k_tension: float = 40.0
    kd_tension: float = 2.5


@dataclass(frozen=True)
class ControllerConfig:
    mode: str = "position_hold"
    pull_threshold: float = 0.05
    landing_height: float = 0.3
    gains: Gains = field(default_factory=Gains)
    goal_pos: Tuple[float, float, float] = (0.0, 0.0, 1.0)
    # horizontal (Tx, Ty) target; derived from goal_pos when None
    goal_tension: Optional[Tuple[float, float]] = None
    max_tilt_deg: float = 20.0
    yaw: float = 0.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.pull_threshold > 0:
            raise ValueError("pull_threshold must be positive")
        if not self.landing_height > 0:
            raise ValueError("landing_height must be positive")
        object.__setattr__(self, "goal_pos", tuple(float(v) for v in self.goal_pos))


def thrust_from_accel(
    accel_cmd: Sequence[float],
    params: QuadParams,
    psi: float = 0.0,
    max_tilt: float = math.radians(20.0),
    known_force: Optional[Sequence[float]] = None,
) -> Tuple[Attitude, float]:
    """Attitude and thrust realizing a desired world acceleration.

    ``known_force`` (e.g. an estimated tether tension) is compensated by the
    thrust.  Tilt is saturated; thrust is then chosen to keep the commanded
    vertical acceleration.
    """
    m, g = params.mass, params.g
    F = m * (np.asarray(accel_cmd, dtype=float) + np.array([0.0, 0.0, g]))
    if known_force is not None:
        F = F - np.asarray(known_force, dtype=float)
    F[2] = max(F[2], 0.2 * m * g)
    att, _ = equilibrium_attitude(F, psi)
    phi = min(max(att.phi, -max_tilt), max_tilt)
    theta = min(max(att.theta, -max_tilt), max_tilt)
    fp = F[2] / (math.cos(phi) * math.cos(theta))
    fp = min(fp, _MAX_THRUST_RATIO * m * g)
    return Attitude(phi, theta, psi), fp


def cascade_controller(
    state: QuadState,
    goal: Sequence[float],
    gains: Gains,
    params: QuadParams = QuadParams(),
    max_tilt_deg: float = 20.0,
    psi: float = 0.0,
) -> Tuple[Attitude, float]:
    """PD outer loop on position, inverted through the thrust model."""
    err = np.asarray(goal, dtype=float) - state.pos
    v = state.vel
    acc = np.array(
        [
            gains.kp_xy * err[0] - gains.kd_xy * v[0],
            gains.kp_xy * err[1] - gains.kd_xy * v[1],
            gains.kp_z * err[2] - gains.kd_z * v[2],
        ]
    )
    return thrust_from_accel(acc, params, psi, math.radians(max_tilt_deg))


def tension_following_update(
    goal: Sequence[float],
    est: TensionVec,
    current_pos: Sequence[float],
    cfg: ControllerConfig,
    following: bool = False,
) -> Tuple[np.ndarray, bool]:
    """Move the goal onto the vehicle while the estimated pull exceeds the threshold.

    The ``following`` flag latches on the first pull.
    """
    if TensionVec(*est).norm() > cfg.pull_threshold:
        return np.array(current_pos, dtype=float), True
    return np.array(goal, dtype=float), following


def tension_goal_controller(
    est: TensionVec,
    goal_tension: Tuple[float, float],
    altitude: float,
    goal_altitude: float,
    gains: Gains,
    vel: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """Desired acceleration from the horizontal tension error and altitude error.

    Tensions are forces on the vehicle, so a stronger pull than the goal
    (``est - goal`` pointing toward the anchor) moves the vehicle toward the
    anchor; a null goal makes it yield until the horizontal pull vanishes.
    """
    v = np.zeros(3) if vel is None else np.asarray(vel, dtype=float)
    ex = est[0] - goal_tension[0]
    ey = est[1] - goal_tension[1]
    return np.array(
        [
            gains.k_tension * ex - gains.kd_tension * v[0],
            gains.k_tension * ey - gains.kd_tension * v[1],
            gains.kp_z * (goal_altitude - altitude) - gains.kd_z * v[2],
        ]
    )


def goal_tension_for(goal_pos: Sequence[float], anchor: AnchorPose, tether: TetherProperties) -> Tuple[float, float]:
    """Horizontal tension a perfect catenary would apply at ``goal_pos``."""
    t = tether_force(goal_pos, anchor, tether)
    return t.tx, t.ty


def landing_monitor(following: bool, altitude: float, cfg: ControllerConfig, already_off: bool = False) -> bool:
    """Motors-off decision; latches once taken."""
    return already_off or (following and altitude < cfg.landing_height)
