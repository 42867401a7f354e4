"""Fixed-rate scenario loop tying dynamics, sensors, filter, estimator and controller."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from ..catenary import TetherProperties
from ..kalman import KalmanConfig, estimate, kalman_init, kalman_step
from ..localization import AnchorPose, locate_from_tension, polar_to_cartesian
from ..tension import Attitude, QuadParams, TensionVec, observe_tension
from .control import (
    ControllerConfig,
    cascade_controller,
    goal_tension_for,
    landing_monitor,
    tension_following_update,
    tension_goal_controller,
    thrust_from_accel,
)
from .dynamics import (
    PullProfile,
    QuadState,
    SensorNoise,
    TetherTaut,
    attitude_lag,
    contact_force,
    sample_sensors,
    step_dynamics,
    tether_force,
)


class TraceRow(NamedTuple):
    t: float
    x: float
    y: float
    z: float
    tx_true: float
    ty_true: float
    tz_true: float
    tx_obs: float
    ty_obs: float
    tz_obs: float
    tx_est: float
    ty_est: float
    tz_est: float
    r_est: float
    z_est: float
    beta_est: float
    x_est: float
    y_est: float
    goal_x: float
    goal_y: float
    goal_z: float
    following: int
    motors_on: int


TRACE_COLUMNS: Tuple[str, ...] = TraceRow._fields


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "scenario"
    duration: float = 10.0
    seed: int = 0
    vehicle: QuadParams = field(default_factory=QuadParams)
    drag: float = 0.0
    tether: TetherProperties = field(default_factory=TetherProperties)
    anchor: AnchorPose = field(default_factory=AnchorPose)
    noise: SensorNoise = field(default_factory=SensorNoise)
    kalman: KalmanConfig = field(default_factory=KalmanConfig)
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    pull: PullProfile = field(default_factory=PullProfile)
    initial_pos: Optional[Tuple[float, float, float]] = None
    dynamics_hz: float = 1000.0
    control_hz: float = 100.0
    attitude_tau: float = 0.05
    ground_z: Optional[float] = 0.0

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        if not (self.dynamics_hz > 0 and self.control_hz > 0):
            raise ValueError("tick rates must be positive")
        ratio = self.dynamics_hz / self.control_hz
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ValueError("dynamics_hz must be an integer multiple of control_hz")
        if self.drag < 0:
            raise ValueError("drag must be non-negative")
        if self.attitude_tau < 0:
            raise ValueError("attitude_tau must be non-negative")


@dataclass
class SimResult:
    config: ScenarioConfig
    rows: List[TraceRow]
    aborted: Optional[str] = None

    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float).reshape(-1, len(TRACE_COLUMNS))

    def column(self, name: str) -> np.ndarray:
        return self.array()[:, TRACE_COLUMNS.index(name)]


class ScenarioAborted(TetherTaut):
    def __init__(self, message: str, partial: SimResult):
        super().__init__(message)
        self.partial = partial


def _initial_state(cfg: ScenarioConfig) -> QuadState:
    pos = np.array(cfg.initial_pos if cfg.initial_pos is not None else cfg.controller.goal_pos, dtype=float)
    tf = tether_force(pos, cfg.anchor, cfg.tether)
    fp = cfg.vehicle.weight - tf.tz
    return QuadState(pos=pos, vel=np.zeros(3), att=Attitude(psi=cfg.controller.yaw), fp=fp)


def run_scenario(cfg: ScenarioConfig) -> SimResult:
    """Simulate ``cfg``; deterministic for a given config (seed included).

    Raises :class:`ScenarioAborted` (a :class:`TetherTaut`) carrying the
    partial trace if the vehicle reaches the tether's length.
    """
    ctrl = cfg.controller
    gains = ctrl.gains
    qp = cfg.vehicle
    n_sub = int(round(cfg.dynamics_hz / cfg.control_hz))
    dt = 1.0 / cfg.dynamics_hz
    dt_ctrl = 1.0 / cfg.control_hz
    n_ticks = int(round(cfg.duration * cfg.control_hz))
    max_tilt_deg = ctrl.max_tilt_deg

    rng = np.random.default_rng(cfg.seed)
    noise = cfg.noise
    kstate = kalman_init(cfg.kalman)
    goal = np.array(ctrl.goal_pos, dtype=float)
    goal_tension = ctrl.goal_tension
    if ctrl.mode == "tension_goal" and goal_tension is None:
        goal_tension = goal_tension_for(goal, cfg.anchor, cfg.tether)
    following = False
    motors_off = False
    rows: List[TraceRow] = []

    try:
        state = _initial_state(cfg)
        att_cmd, fp_cmd = state.att, state.fp
        for tick in range(n_ticks):
            t = tick * dt_ctrl
            tf = tether_force(state.pos, cfg.anchor, cfg.tether)
            pull = cfg.pull.force_at(t)
            contact = contact_force(state, tf, pull, qp, cfg.ground_z, cfg.drag)
            sample = sample_sensors(state, tf, pull, noise, qp, rng=rng, t=t, drag=cfg.drag, contact=contact)
            obs = observe_tension(sample, qp)
            kstate = kalman_step(kstate, cfg.kalman, obs)
            est = estimate(kstate, cfg.kalman)
            loc = locate_from_tension(est, cfg.tether, cfg.anchor)
            x_est, y_est, _ = polar_to_cartesian(loc)

            if ctrl.mode == "tension_following":
                goal, following = tension_following_update(goal, est, state.pos, ctrl, following)
                motors_off = landing_monitor(following, state.pos[2], ctrl, motors_off)

            if motors_off:
                if state.motors_on:
                    state = replace(state, motors_on=False, fp=0.0)
            elif ctrl.mode == "tension_goal":
                acc = tension_goal_controller(est, goal_tension, state.pos[2], goal[2], gains, state.vel)
                att_cmd, fp_cmd = thrust_from_accel(
                    acc, qp, ctrl.yaw, math.radians(max_tilt_deg), known_force=est
                )
            else:
                att_cmd, fp_cmd = cascade_controller(state, goal, gains, qp, max_tilt_deg, ctrl.yaw)

            true_t = np.asarray(tf) + pull
            rows.append(
                TraceRow(
                    t, *state.pos, *true_t, *obs, *est,
                    loc.r, loc.z, loc.beta, x_est, y_est,
                    *goal, int(following), int(state.motors_on),
                )
            )

            for _ in range(n_sub):
                if state.motors_on:
                    state = replace(
                        state,
                        att=attitude_lag(state.att, att_cmd, dt, cfg.attitude_tau),
                        fp=fp_cmd,
                    )
                state = step_dynamics(state, tf, pull, qp, dt, cfg.drag, cfg.ground_z)
                tf = tether_force(state.pos, cfg.anchor, cfg.tether)
    except TetherTaut as exc:
        raise ScenarioAborted(str(exc), SimResult(cfg, rows, aborted=str(exc))) from exc
    return SimResult(cfg, rows)


def summarize(result: SimResult, transient: float = 5.0) -> dict:
    """Error and outcome statistics over the trace after ``transient`` seconds."""
    arr = result.array()
    col = {name: i for i, name in enumerate(TRACE_COLUMNS)}
    if len(arr) == 0:
        return {"rows": 0}
    keep = arr[:, col["t"]] >= transient
    if not keep.any():
        keep[:] = True
    a = arr[keep]
    t_err = a[:, [col["tx_est"], col["ty_est"], col["tz_est"]]] - a[:, [col["tx_true"], col["ty_true"], col["tz_true"]]]
    p_err = a[:, [col["x_est"], col["y_est"], col["z_est"]]] - a[:, [col["x"], col["y"], col["z"]]]
    h_est = np.hypot(a[:, col["tx_est"]], a[:, col["ty_est"]])
    last = arr[-1]
    return {
        "rows": int(len(arr)),
        "tension_rms_error": float(np.sqrt(np.mean(np.sum(t_err**2, axis=1)))),
        "position_rms_error": float(np.sqrt(np.mean(np.sum(p_err**2, axis=1)))),
        "position_mean_error_xyz": [float(v) for v in p_err.mean(axis=0)],
        "horizontal_tension_mean": float(h_est.mean()),
        "following": bool(last[col["following"]]),
        "motors_off": not bool(last[col["motors_on"]]),
        "final_altitude": float(last[col["z"]]),
        "aborted": result.aborted,
    }
