"""Point-mass vehicle dynamics, catenary tether reaction and sensor synthesis."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from ..catenary import Point2, SolverSettings, TetherProperties, curve_through
from ..localization import AnchorPose
from ..tension import Attitude, ImuSample, QuadParams, TensionVec, rotation_world_from_body

_DEFAULT_SOLVER = SolverSettings()


class TetherTaut(RuntimeError):
    """The vehicle is at or beyond the tether's reach."""


@dataclass(frozen=True)
class QuadState:
    pos: np.ndarray
    vel: np.ndarray
    att: Attitude = Attitude()
    fp: float = 0.0
    motors_on: bool = True

    def __post_init__(self):
        object.__setattr__(self, "pos", np.asarray(self.pos, dtype=float))
        object.__setattr__(self, "vel", np.asarray(self.vel, dtype=float))
        if self.fp < 0:
            raise ValueError(f"thrust must be non-negative, got {self.fp}")
        if not self.motors_on and self.fp != 0.0:
            raise ValueError("thrust must be zero with motors off")


@dataclass(frozen=True)
class SensorNoise:
    accel_sigma: float = 0.3
    thrust_sigma: float = 0.005
    attitude_sigma: float = math.radians(0.2)
    seed: int = 0

    def __post_init__(self):
        for name in ("accel_sigma", "thrust_sigma", "attitude_sigma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class PullSegment:
    t_start: float
    t_end: float
    force: Tuple[float, float, float]


@dataclass(frozen=True)
class PullProfile:
    """Scheduled extra pull transmitted through the tether to the vehicle."""

    segments: Tuple[PullSegment, ...] = field(default=())

    def __post_init__(self):
        segs = tuple(
            s if isinstance(s, PullSegment) else PullSegment(*s) for s in self.segments
        )
        object.__setattr__(self, "segments", segs)
        last_end = -math.inf
        for s in segs:
            if not s.t_end > s.t_start:
                raise ValueError(f"pull segment ends before it starts: {s}")
            if s.t_start < last_end:
                raise ValueError("pull segments must be time-ordered and non-overlapping")
            last_end = s.t_end

    def force_at(self, t: float) -> np.ndarray:
        for s in self.segments:
            if s.t_start <= t < s.t_end:
                return np.asarray(s.force, dtype=float)
        return np.zeros(3)


def tether_force(
    uav_pos: Sequence[float],
    anchor: AnchorPose,
    tether: TetherProperties,
    settings: SolverSettings = _DEFAULT_SOLVER,
) -> TensionVec:
    """Force the hanging tether applies to the vehicle at ``uav_pos``.

    The curve lies in the vertical plane through the vehicle's azimuth; the
    anchor sits at radial distance ``r_i`` on that plane.
    """
    x, y, z = float(uav_pos[0]), float(uav_pos[1]), float(uav_pos[2])
    r = math.hypot(x, y)
    dr = r - anchor.r_i
    dz = z - anchor.z_i
    chord = math.hypot(dr, dz)
    L = tether.s_total
    if chord >= L:
        raise TetherTaut(f"vehicle at distance {chord:.4f} m from anchor, tether length {L} m")

    if abs(dr) <= 1e-12 * L:
        # vertical span: the slack hangs as a doubled line below both ends
        s2 = 0.5 * (L + dz)
        return TensionVec(0.0, 0.0, -tether.omega * s2)

    side = 1.0 if dr > 0 else -1.0
    a, x0, _, _ = curve_through(Point2(anchor.r_i, anchor.z_i), Point2(r, z), L, settings)
    H = tether.omega * a
    # signed arc length from the lowest point to the vehicle, along the pull
    s2 = a * math.sinh(side * (r - x0) / a)
    beta = math.atan2(y, x)
    return TensionVec(
        -side * H * math.cos(beta),
        -side * H * math.sin(beta),
        -tether.omega * s2,
    )


def step_dynamics(
    state: QuadState,
    tether_f: TensionVec,
    pull,
    params: QuadParams,
    dt: float,
    drag: float = 0.0,
    ground_z: Optional[float] = None,
) -> QuadState:
    """Semi-implicit Euler step of the translational dynamics.

    ``params.f_ext`` is the estimator-side correction term, so the simulated
    disturbance is its negative.  With ``ground_z`` set, the vehicle cannot
    sink below it; with motors off it comes to rest on contact.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    fp = state.fp if state.motors_on else 0.0
    force = net_force(state, tether_f, pull, params, drag, fp)
    acc = force / params.mass
    vel = state.vel + acc * dt
    pos = state.pos + vel * dt
    if ground_z is not None and pos[2] <= ground_z:
        pos[2] = ground_z
        if state.motors_on:
            vel[2] = max(vel[2], 0.0)
        else:
            vel = np.zeros(3)
    return replace(state, pos=pos, vel=vel, fp=fp)


def net_force(state: QuadState, tether_f, pull, params: QuadParams, drag: float = 0.0, fp=None) -> np.ndarray:
    if fp is None:
        fp = state.fp if state.motors_on else 0.0
    R = rotation_world_from_body(state.att)
    return (
        R[:, 2] * fp
        + np.asarray(tether_f, dtype=float)
        + np.asarray(pull, dtype=float)
        - drag * state.vel
        - np.asarray(params.f_ext)
        - np.array([0.0, 0.0, params.mass * params.g])
    )


def contact_force(
    state: QuadState, tether_f, pull, params: QuadParams, ground_z: Optional[float], drag: float = 0.0
) -> np.ndarray:
    """Normal force from the ground when resting on it, else zero."""
    if ground_z is None or state.pos[2] > ground_z + 1e-12 or state.vel[2] > 0:
        return np.zeros(3)
    fz = net_force(state, tether_f, pull, params, drag)[2]
    return np.array([0.0, 0.0, max(0.0, -fz)])


def sample_sensors(
    state: QuadState,
    tether_f: TensionVec,
    pull,
    noise: SensorNoise,
    params: QuadParams,
    rng: Optional[np.random.Generator] = None,
    t: float = 0.0,
    drag: float = 0.0,
    contact=None,
) -> ImuSample:
    """Synthesize one IMU/attitude/thrust reading.

    The accelerometer reads specific force in the body frame.  Random draws
    happen in a fixed order (accel xyz, thrust, attitude) so a seeded
    generator yields a reproducible stream.
    """
    if rng is None:
        rng = noise.rng()
    fp = state.fp if state.motors_on else 0.0
    R = rotation_world_from_body(state.att)
    force = net_force(state, tether_f, pull, params, drag, fp)
    if contact is not None:
        force = force + np.asarray(contact, dtype=float)
    specific = force / params.mass + np.array([0.0, 0.0, params.g])
    accel_body = R.T @ specific

    z = rng.standard_normal(7)
    accel_body = accel_body + noise.accel_sigma * z[:3]
    thrust = max(0.0, fp + noise.thrust_sigma * z[3])
    att = Attitude(
        state.att.phi + noise.attitude_sigma * z[4],
        state.att.theta + noise.attitude_sigma * z[5],
        state.att.psi + noise.attitude_sigma * z[6],
    )
    return ImuSample(t=t, accel_body=accel_body, attitude=att, thrust=thrust)


def attitude_lag(att: Attitude, att_cmd: Attitude, dt: float, tau: float) -> Attitude:
    """First-order approach of the attitude toward its command."""
    k = 1.0 - math.exp(-dt / tau) if tau > 0 else 1.0
    return Attitude(*(c + k * (cmd - c) for c, cmd in zip(att, att_cmd)))


def hover_state(pos, params: QuadParams, tether: TetherProperties, anchor: AnchorPose) -> QuadState:
    """Level state at ``pos`` with thrust balancing weight and tether pull."""
    tf = tether_force(pos, anchor, tether)
    fp = params.weight - tf.tz
    return QuadState(pos=np.asarray(pos, dtype=float), vel=np.zeros(3), att=Attitude(), fp=fp)


def equilibrium_attitude(force_needed: np.ndarray, psi: float = 0.0) -> Tuple[Attitude, float]:
    """Attitude and thrust whose thrust vector equals ``force_needed``."""
    c, s = math.cos(psi), math.sin(psi)
    fx, fy, fz = force_needed
    # thrust column for psi = 0 is (sin phi cos th, -sin th, cos phi cos th)
    bx = c * fx + s * fy
    by = -s * fx + c * fy
    fp = math.sqrt(fx * fx + fy * fy + fz * fz)
    phi = math.atan2(bx, fz)
    theta = math.atan2(-by, math.hypot(bx, fz))
    return Attitude(phi, theta, psi), fp

