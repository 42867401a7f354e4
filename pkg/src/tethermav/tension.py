"""Indirect tether-tension observation from IMU, attitude and thrust.

Frames and sign conventions
---------------------------
World frame is z-up.  The accelerometer reports specific force (kinematic
acceleration with gravity removed, ``a - g_vec``), so a level vehicle at rest
reads ``(0, 0, +g)``.  Tensions are the force the tether applies *to the
vehicle*: a hanging tether gives a negative ``tz``.

The Euler-angle rotation is ``Rz(psi) @ Ry(phi) @ Rx(theta)``.  This is the
ordering whose third row is ``[-sin(phi), cos(phi) sin(theta), cos(phi)
cos(theta)]`` and whose thrust column gives the horizontal tension formulas
used by :func:`horizontal_tension_components`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Tuple

import numpy as np

from .catenary import TetherProperties

GRAVITY = 9.81


class Attitude(NamedTuple):
    phi: float = 0.0
    theta: float = 0.0
    psi: float = 0.0


class TensionVec(NamedTuple):
    tx: float = 0.0
    ty: float = 0.0
    tz: float = 0.0

    @classmethod
    def from_array(cls, v) -> "TensionVec":
        return cls(float(v[0]), float(v[1]), float(v[2]))

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    def norm(self) -> float:
        return math.sqrt(self.tx * self.tx + self.ty * self.ty + self.tz * self.tz)

    def horizontal(self) -> float:
        return math.hypot(self.tx, self.ty)


@dataclass(frozen=True)
class ImuSample:
    t: float
    accel_body: np.ndarray
    attitude: Attitude
    thrust: float

    def __post_init__(self):
        if self.thrust < 0:
            raise ValueError(f"thrust must be non-negative, got {self.thrust}")


@dataclass(frozen=True)
class QuadParams:
    """Vehicle mass [kg], gravity [m/s^2] and a constant external force [N]."""

    mass: float = 0.033
    g: float = GRAVITY
    f_ext: Tuple[float, float, float] = field(default=(0.0, 0.0, 0.0))

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.g > 0:
            raise ValueError(f"g must be positive, got {self.g}")
        object.__setattr__(self, "f_ext", tuple(float(v) for v in self.f_ext))

    @property
    def weight(self) -> float:
        return self.mass * self.g


def rotation_world_from_body(att: Attitude) -> np.ndarray:
    sf, cf = math.sin(att.phi), math.cos(att.phi)
    st, ct = math.sin(att.theta), math.cos(att.theta)
    sp, cp = math.sin(att.psi), math.cos(att.psi)
    return np.array(
        [
            [cp * cf, cp * sf * st - sp * ct, cp * sf * ct + sp * st],
            [sp * cf, sp * sf * st + cp * ct, sp * sf * ct - cp * st],
            [-sf, cf * st, cf * ct],
        ]
    )


def thrust_direction(att: Attitude) -> np.ndarray:
    """World-frame direction of the body z axis (third column of the rotation)."""
    sf, cf = math.sin(att.phi), math.cos(att.phi)
    st, ct = math.sin(att.theta), math.cos(att.theta)
    sp, cp = math.sin(att.psi), math.cos(att.psi)
    return np.array([cp * sf * ct + sp * st, sp * sf * ct - cp * st, cf * ct])


def accel_world_z(att: Attitude, accel_body) -> float:
    """World-z component of a body-frame acceleration (gravity-inclusive)."""
    ax, ay, az = accel_body
    return (
        -math.sin(att.phi) * ax
        + math.cos(att.phi) * math.sin(att.theta) * ay
        + math.cos(att.phi) * math.cos(att.theta) * az
    )


def observe_tension(sample: ImuSample, params: QuadParams) -> TensionVec:
    """Raw tension observation ``m*f - R e3 Fp + F_ext`` from one IMU sample.

    ``f`` is the measured specific force rotated into the world frame, which
    already equals ``a + g e3``.
    """
    R = rotation_world_from_body(sample.attitude)
    specific = R @ np.asarray(sample.accel_body, dtype=float)
    t = params.mass * specific - R[:, 2] * sample.thrust + np.asarray(params.f_ext)
    return TensionVec.from_array(t)


def vertical_tension(att: Attitude, a_z: float, fp: float, params: QuadParams) -> float:
    """Signed vertical tension; ``a_z`` is the gravity-inclusive world z acceleration."""
    return params.mass * a_z - math.cos(att.theta) * math.cos(att.phi) * fp


def horizontal_tension_components(att: Attitude, fp: float) -> Tuple[float, float]:
    """Horizontal tension balancing a tilted thrust at static equilibrium."""
    sf, cf = math.sin(att.phi), math.cos(att.phi)
    st, ct = math.sin(att.theta), math.cos(att.theta)
    sp, cp = math.sin(att.psi), math.cos(att.psi)
    tx = -(sp * st + cp * sf * ct) * fp
    ty = (cp * st - sp * sf * ct) * fp
    return tx, ty


def bench_horizontal_gt(weight: float, zq: float, za: float, rq: float) -> float:
    """Ground-truth horizontal tension from a hanging mass over a pulley arm.

    ``weight`` is the mass's weight [N], ``zq``/``za`` the heights of the
    vehicle and of the arm, ``rq`` the vehicle's radial distance from the arm.
    """
    if not rq > 0:
        raise ValueError(f"rq must be positive, got {rq}")
    gamma = math.atan((zq - za) / rq)
    return math.cos(gamma) * weight


def bench_vertical_gt(tether: TetherProperties, z: float) -> float:
    """Weight of the tether lifted off the ground during a vertical takeoff."""
    if z < 0:
        raise ValueError(f"z must be non-negative, got {z}")
    return tether.omega * z
