"""Catenary tether geometry and the endpoint/length inverse solver.

The curve is ``y = a*cosh((x - x0)/a) + C`` in a 2D frame whose abscissa is
horizontal (or radial) distance and whose ordinate is height.  Point ``p1`` is
the ground-side end (anchor) and ``p2`` the vehicle end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple, Optional, Tuple

import numpy as np

# sinh/cosh overflow a double just above 710
_MAX_EXP_ARG = 700.0


class CatenaryError(ValueError):
    """Base class for catenary solver failures."""


class TooShort(CatenaryError):
    """The tether is not longer than the straight chord between its ends."""


class NoConvergence(CatenaryError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class NoPhysicalRoot(CatenaryError):
    """The quadratic initial-guess equation has no positive real root."""


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")


@dataclass(frozen=True)
class TetherProperties:
    """Weight per unit length ``omega`` [N/m] and total length ``s_total`` [m]."""

    omega: float = 0.0478
    s_total: float = 1.6

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.s_total > 0:
            raise ValueError(f"s_total must be positive, got {self.s_total}")


@dataclass(frozen=True)
class CatenaryParams:
    """Solved curve: shape parameter ``a``, lowest-point abscissa ``x0``,
    vertical offset ``C`` and arc lengths from the lowest point to the
    origin end (``s1``) and to the vehicle end (``s2``)."""

    a: float
    x0: float
    C: float
    s1: float = 0.0
    s2: float = 0.0

    @property
    def y0(self) -> float:
        """Height of the lowest point in the world frame."""
        return self.a + self.C


@dataclass(frozen=True)
class TensionPolar:
    H: float
    Tv: float
    mag: float


@dataclass(frozen=True)
class SolverSettings:
    tol: float = 1e-9
    max_iter: int = 100
    # None means 1e-6 * s_total, resolved per solve
    dy_epsilon: Optional[float] = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.dy_epsilon is not None and not self.dy_epsilon > 0:
            raise ValueError("dy_epsilon must be positive")

    def epsilon_for(self, s_total: float) -> float:
        return self.dy_epsilon if self.dy_epsilon is not None else 1e-6 * s_total


class RootResult(NamedTuple):
    a: float
    iterations: int
    residual: float
    bisected: bool


def eval_height(params: CatenaryParams, x):
    """Height of the curve at abscissa ``x`` (scalar or array)."""
    return params.a * np.cosh((np.asarray(x, dtype=float) - params.x0) / params.a) + params.C


def arc_length_from_lowest(params: CatenaryParams, x):
    """Arc length between the lowest point and abscissa ``x``."""
    return params.a * np.sinh(np.abs(np.asarray(x, dtype=float) - params.x0) / params.a)


def end_tensions(
    params: CatenaryParams,
    tether: TetherProperties,
    side: Literal["origin", "uav"] = "uav",
) -> TensionPolar:
    if side == "origin":
        s = params.s1
    elif side == "uav":
        s = params.s2
    else:
        raise ValueError(f"side must be 'origin' or 'uav', got {side!r}")
    H = tether.omega * params.a
    Tv = tether.omega * s
    return TensionPolar(H=H, Tv=Tv, mag=math.sqrt(H * H + Tv * Tv))


def decompose_horizontal(H: float, beta: float) -> Tuple[float, float]:
    return math.cos(beta) * H, math.sin(beta) * H


def compose_horizontal(tx: float, ty: float) -> Tuple[float, float]:
    """Inverse of :func:`decompose_horizontal`; azimuth is 0 for a null tension."""
    H = math.hypot(tx, ty)
    if H == 0.0:
        return 0.0, 0.0
    return H, math.atan2(ty, tx)


def _taylor_guess(half_len: float, dx: float) -> float:
    # (half_len - dx) a^4 - dx^3/3! a^2 - dx^5/5! = 0, quadratic in alpha = a^2
    qa = half_len - dx
    qb = -dx**3 / 6.0
    qc = -dx**5 / 120.0
    if qa == 0.0:
        raise NoPhysicalRoot("leading coefficient vanishes (tether length equals chord)")
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        raise NoPhysicalRoot("complex roots only")
    sq = math.sqrt(disc)
    roots = ((-qb + sq) / (2.0 * qa), (-qb - sq) / (2.0 * qa))
    positive = [r for r in roots if r > 0.0]
    if not positive:
        raise NoPhysicalRoot(
            f"no positive root for alpha (coefficients {qa:.3g}, {qb:.3g}, {qc:.3g})"
        )
    return math.sqrt(max(positive))


# beyond this dx/a the fifth-order expansion of sinh is a poor start
_TAYLOR_U_MAX = 3.0


def _steep_guess(dx: float, length: float) -> float:
    """Start for near-vertical spans from the large-``u`` form of
    ``sinh(u)/u = length/(2 dx)``, with ``u = dx/a``."""
    rho = length / (2.0 * dx)
    u = math.log(2.0 * rho)
    for _ in range(8):
        u = math.asinh(rho * u)
    return dx / u


def initial_guess_a(dx: float, dY: float, s_total: float) -> float:
    """Starting value for ``a`` from a fifth-order Taylor expansion of sinh.

    ``dx`` is the half-span ``(x2 - x1)/2`` (its magnitude is used), ``dY`` the
    height difference ``y2 - y1`` (must be non-zero) and ``s_total`` the tether
    length.  Raises :class:`NoPhysicalRoot` when no positive real root exists,
    which happens when the length does not exceed the chord.
    """
    dx = abs(dx)
    if dx == 0.0:
        raise NoPhysicalRoot("zero half-span")
    if dY == 0.0:
        raise ValueError("dY must be non-zero; offset it by dy_epsilon first")
    u = dY / s_total
    if abs(u) >= 1.0:
        raise NoPhysicalRoot("|dY| >= s_total")
    half_len = dY / (2.0 * math.sinh(math.atanh(u)))
    return _taylor_guess(half_len, dx)


def _length_residual(a: float, dx: float, dY: float, k: float) -> Tuple[float, float]:
    """Residual ``dY - 2 a sinh(dx/a) k`` and its derivative in ``a``.

    ``k = sinh(atanh(dY/s_total))``.  With ``k = 1`` and ``dY`` replaced by
    ``sqrt(s_total^2 - dY^2)`` it is the level-ends length equation.
    """
    u = dx / a
    if u > _MAX_EXP_ARG:
        return -math.copysign(math.inf, k), math.nan
    sh = math.sinh(u)
    f = dY - 2.0 * a * sh * k
    df = -2.0 * k * (sh - u * math.cosh(u))
    return f, df


def _bisect(fun, lo: float, hi: float, tol: float, max_iter: int, start_iter: int) -> RootResult:
    f_lo = fun(lo)[0]
    f_hi = fun(hi)[0]
    # geometric expansion until the root is bracketed; the residual is monotone in a
    for _ in range(200):
        if math.copysign(1.0, f_lo) != math.copysign(1.0, f_hi):
            break
        if abs(f_lo) < abs(f_hi):
            lo /= 100.0
            f_lo = fun(lo)[0]
        else:
            hi *= 100.0
            f_hi = fun(hi)[0]
    else:
        raise NoConvergence("could not bracket the root", min(abs(f_lo), abs(f_hi)))

    it = start_iter
    mid, f_mid = lo, f_lo
    while it < max_iter:
        it += 1
        mid = math.sqrt(lo * hi)
        f_mid = fun(mid)[0]
        if abs(f_mid) <= tol or hi / lo - 1.0 < 4e-16:
            return RootResult(mid, it, f_mid, True)
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    raise NoConvergence(
        f"bisection did not reach tol={tol:g} in {max_iter} iterations", abs(f_mid)
    )


def solve_parameter_a(
    dx: float,
    dY: float,
    s_total: float,
    settings: SolverSettings = SolverSettings(),
    a0: Optional[float] = None,
) -> RootResult:
    """Newton-Raphson solve for ``a`` with a bisection fallback.

    With ``k = sinh(atanh(dY/s_total))`` the residual is tested both raw and
    divided by ``k`` (in meters of horizontal-equivalent length), so accuracy
    holds as ``dY`` shrinks and the end heights stay within ``tol`` for steep
    spans.  Below
    ``dy_epsilon`` the level-ends equation ``s_total = 2 a sinh(dx/a)`` (with
    the chord's height difference folded in) is solved instead.
    """
    dx = abs(dx)
    chord = math.hypot(2.0 * dx, dY)
    if s_total <= chord:
        raise TooShort(f"tether shorter than chord ({s_total:g} <= {chord:g})")
    if dx == 0.0:
        raise CatenaryError("vertical span: the curve degenerates to a hanging line (a -> 0)")

    if abs(dY) < settings.epsilon_for(s_total):
        # level-ends form: sqrt(s^2 - dY^2) - 2 a sinh(dx/a)
        half = math.sqrt(s_total * s_total - dY * dY)
        fun = lambda a: _length_residual(a, dx, half, 1.0)  # noqa: E731
        scale = 1.0
        guess = _taylor_guess(half / 2.0, dx)
    else:
        k = math.sinh(math.atanh(dY / s_total))
        fun = lambda a: _length_residual(a, dx, dY, k)  # noqa: E731
        scale = min(1.0, abs(k))
        guess = initial_guess_a(dx, dY, s_total)

    if a0 is None:
        a0 = guess
        if dx / a0 > _TAYLOR_U_MAX:
            a0 = _steep_guess(dx, math.sqrt(s_total * s_total - dY * dY))
    tol = settings.tol * scale
    lo, hi = a0 / 100.0, a0 * 100.0

    a = a0
    f = math.nan
    for it in range(settings.max_iter):
        f, df = fun(a)
        if abs(f) <= tol:
            return _rescale(_polish(fun, RootResult(a, it, f, False)), scale)
        if not (math.isfinite(f) and math.isfinite(df)) or df == 0.0:
            return _rescale(_polish(fun, _bisect(fun, lo, hi, tol, settings.max_iter, it)), scale)
        a_new = a - f / df
        if not (lo <= a_new <= hi):
            return _rescale(_polish(fun, _bisect(fun, lo, hi, tol, settings.max_iter, it)), scale)
        if a_new == a:
            # step below float resolution; residual is at its floor
            return RootResult(a, it, f / scale, False)
        a = a_new
    raise NoConvergence(
        f"Newton did not reach tol={settings.tol:g} in {settings.max_iter} iterations",
        abs(f) / scale,
    )


def _polish(fun, res: RootResult) -> RootResult:
    """One extra Newton step from a converged root, kept only if it helps.

    Nearly free at this point and it buys several digits, which keeps the
    end-point equations within tolerance even where they amplify the
    residual being tested.
    """
    f, df = fun(res.a)
    if not (math.isfinite(df) and df != 0.0):
        return res
    a = res.a - f / df
    if not a > 0:
        return res
    f_new = fun(a)[0]
    if abs(f_new) < abs(f):
        return RootResult(a, res.iterations + 1, f_new, res.bisected)
    return res


def _rescale(res: RootResult, scale: float) -> RootResult:
    return res._replace(residual=res.residual / scale)


def curve_through(p1: Point2, p2: Point2, s_total: float, settings: SolverSettings):
    """Solve ``(a, x0, C)`` through both points without requiring the lowest
    point to lie between them; also returns the root-finder report."""
    dx = (p2.x - p1.x) / 2.0
    dY = p2.y - p1.y
    x_avg = (p1.x + p2.x) / 2.0
    root = solve_parameter_a(dx, dY, s_total, settings)
    a = root.a
    x0 = x_avg - math.copysign(1.0, dx) * a * math.atanh(dY / s_total)
    C = p1.y - a * math.cosh((p1.x - x0) / a)
    return a, x0, C, root


def solve_from_endpoints(
    p1: Point2,
    p2: Point2,
    tether: TetherProperties,
    settings: SolverSettings = SolverSettings(),
) -> CatenaryParams:
    """Recover the curve through ``p1`` and ``p2`` for the tether's length.

    The lowest point must lie between the two ends (closed interval), since
    the two arc lengths are required to add up to ``s_total``.  A curve whose
    virtual minimum falls outside the span raises :class:`CatenaryError`.
    """
    a, x0, C, _ = curve_through(p1, p2, tether.s_total, settings)
    xmin, xmax = min(p1.x, p2.x), max(p1.x, p2.x)
    slack = settings.tol * max(1.0, a)
    if not (xmin - slack <= x0 <= xmax + slack):
        raise CatenaryError(
            f"lowest point x0={x0:.6g} lies outside the span [{xmin:.6g}, {xmax:.6g}]; "
            "arc lengths would not add up to the tether length"
        )
    s1 = a * math.sinh(abs(p1.x - x0) / a)
    s2 = a * math.sinh(abs(p2.x - x0) / a)
    return CatenaryParams(a=a, x0=x0, C=C, s1=s1, s2=s2)


def system_residuals(
    params: CatenaryParams, p1: Point2, p2: Point2, tether: TetherProperties
) -> np.ndarray:
    """Residuals of the five defining equations (heights, length, arc lengths)."""
    return np.array(
        [
            float(eval_height(params, p1.x)) - p1.y,
            float(eval_height(params, p2.x)) - p2.y,
            params.s1 + params.s2 - tether.s_total,
            float(arc_length_from_lowest(params, p1.x)) - params.s1,
            float(arc_length_from_lowest(params, p2.x)) - params.s2,
        ]
    )
