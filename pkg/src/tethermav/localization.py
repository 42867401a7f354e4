"""Vehicle position from the tension the tether applies to it.

The horizontal tension gives the curve parameter ``a = H / omega`` and the
vertical tension gives the arc length on the vehicle side ``s2 = |Tv| /
omega``.  Together with the anchor position and tether length the vehicle end
of the curve is fixed.  The lowest point is assumed to lie between anchor and
vehicle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from .catenary import TetherProperties, compose_horizontal
from .tension import TensionVec

# below this the a -> 0 limits are used
A_MIN = 1e-6


class InvalidArc(ValueError):
    pass


@dataclass(frozen=True)
class AnchorPose:
    r_i: float = 0.0
    z_i: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.r_i) and math.isfinite(self.z_i)):
            raise ValueError(f"non-finite anchor ({self.r_i}, {self.z_i})")
        if self.r_i < 0:
            raise ValueError(f"anchor radial coordinate must be non-negative, got {self.r_i}")


@dataclass(frozen=True)
class PolarPosition:
    r: float
    z: float
    beta: float = 0.0
    # s2 was clamped to the tether length while computing this position
    clamped: bool = False

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"radial distance must be non-negative, got {self.r}")


class CurveFromTension(NamedTuple):
    a: float
    s2: float
    clamped: bool


def params_from_tension(H: float, Tv: float, tether: TetherProperties) -> CurveFromTension:
    if H < 0:
        raise ValueError(f"horizontal tension must be non-negative, got {H}")
    a = H / tether.omega
    s2 = abs(Tv) / tether.omega
    clamped = s2 > tether.s_total
    if clamped:
        s2 = tether.s_total
    return CurveFromTension(a, s2, clamped)


def locate(a: float, s2: float, tether: TetherProperties, anchor: AnchorPose = AnchorPose()) -> PolarPosition:
    if not 0.0 <= s2 <= tether.s_total:
        raise InvalidArc(f"s2={s2} outside [0, {tether.s_total}]")
    if a < 0:
        raise ValueError(f"a must be non-negative, got {a}")
    s1 = tether.s_total - s2
    if a <= A_MIN:
        return PolarPosition(r=anchor.r_i, z=anchor.z_i + abs(s2) - abs(s1))
    r0 = anchor.r_i + a * math.asinh(s1 / a)
    r = r0 + a * math.asinh(s2 / a)
    C = anchor.z_i - a * math.cosh((anchor.r_i - r0) / a)
    z = a * math.cosh((r - r0) / a) + C
    return PolarPosition(r=r, z=z)


def locate_from_tension(
    T: TensionVec,
    tether: TetherProperties,
    anchor: AnchorPose = AnchorPose(),
    beta: Optional[float] = None,
) -> PolarPosition:
    """Position from a tension estimate (force applied to the vehicle).

    The tether pulls the vehicle back toward the anchor, so the azimuth of
    the vehicle is that of ``(-Tx, -Ty)``.  ``beta`` overrides it when the
    direction is known from elsewhere.
    """
    H, beta_est = compose_horizontal(-T.tx, -T.ty)
    curve = params_from_tension(H, T.tz, tether)
    pos = locate(curve.a, curve.s2, tether, anchor)
    return PolarPosition(
        r=pos.r,
        z=pos.z,
        beta=beta_est if beta is None else beta,
        clamped=curve.clamped,
    )


def polar_to_cartesian(p: PolarPosition) -> Tuple[float, float, float]:
    return p.r * math.cos(p.beta), p.r * math.sin(p.beta), p.z
