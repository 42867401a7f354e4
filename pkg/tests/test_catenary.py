import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import catenary_a, catenary_curve, cosh_series, sinh_series
from tethermav.catenary import (
    CatenaryError,
    CatenaryParams,
    NoConvergence,
    NoPhysicalRoot,
    Point2,
    SolverSettings,
    TetherProperties,
    TooShort,
    arc_length_from_lowest,
    compose_horizontal,
    decompose_horizontal,
    end_tensions,
    eval_height,
    initial_guess_a,
    solve_from_endpoints,
    solve_parameter_a,
    system_residuals,
)

# frozen from the series / brentq oracles in oracles.py
COSH_1 = 1.5430806348152437
SINH_1 = 1.1752011936438014
A_REF = 0.30298082856491204
X0_REF = 0.40204218289921384
C_REF = -0.6112387381738765
A_LEVEL_REF = 0.4695415231265283

UNIT = CatenaryParams(a=1.0, x0=0.0, C=0.0)


def test_frozen_values_match_oracles():
    assert cosh_series(1.0) == pytest.approx(COSH_1, abs=1e-15)
    assert sinh_series(1.0) == pytest.approx(SINH_1, abs=1e-15)
    a, x0, C = catenary_curve(0.0, 0.0, 1.0, 0.5, 1.6)
    assert (a, x0, C) == pytest.approx((A_REF, X0_REF, C_REF), rel=1e-12)
    assert catenary_a(0.0, 0.0, 1.0, 0.0, 1.2) == pytest.approx(A_LEVEL_REF, rel=1e-12)


class TestGeometry:
    def test_height_minimum(self):
        assert eval_height(UNIT, 0.0) == 1.0

    def test_height_symmetric(self):
        assert eval_height(UNIT, 1.0) == eval_height(UNIT, -1.0)

    def test_height_cosh1(self):
        assert eval_height(UNIT, 1.0) == pytest.approx(1.5430806348, abs=1e-10)
        assert eval_height(UNIT, 1.0) == pytest.approx(COSH_1, rel=1e-15)

    def test_height_vectorized(self):
        xs = np.linspace(-1, 1, 5)
        assert eval_height(UNIT, xs).shape == (5,)

    def test_minimum_ordinate(self):
        p = CatenaryParams(a=0.7, x0=0.3, C=-2.0)
        assert p.y0 == pytest.approx(eval_height(p, 0.3))
        assert p.C == pytest.approx(p.y0 - p.a)

    def test_arc_zero_at_lowest(self):
        assert arc_length_from_lowest(UNIT, 0.0) == 0.0
        assert arc_length_from_lowest(CatenaryParams(2.0, 0.5, 0.0), 0.5) == 0.0

    def test_arc_sinh1(self):
        assert arc_length_from_lowest(UNIT, 1.0) == pytest.approx(1.1752011936, abs=1e-10)
        assert arc_length_from_lowest(UNIT, -1.0) == pytest.approx(SINH_1, rel=1e-15)

    @given(st.floats(0.05, 10), st.floats(-3, 3), st.floats(0, 5), st.floats(1e-3, 5))
    def test_arc_increasing(self, a, x0, d, step):
        p = CatenaryParams(a, x0, 0.0)
        assume(d / a < 300)
        assert arc_length_from_lowest(p, x0 + d + step) > arc_length_from_lowest(p, x0 + d)
        assert arc_length_from_lowest(p, x0 - d - step) > arc_length_from_lowest(p, x0 - d)


class TestTensions:
    def test_uav_side(self):
        t = end_tensions(CatenaryParams(0.5, 0.0, 0.0, s2=1.0), TetherProperties(omega=0.1))
        assert t.H == pytest.approx(0.05)
        assert t.Tv == pytest.approx(0.10)
        assert t.mag == pytest.approx(math.sqrt(0.0125))

    def test_vertical_tether(self):
        t = end_tensions(CatenaryParams(0.0, 0.0, 0.0, s2=1.6), TetherProperties(omega=0.0478))
        assert t.H == 0.0
        assert t.Tv == pytest.approx(0.0765, abs=1e-4)

    def test_origin_side(self):
        t = end_tensions(CatenaryParams(0.8, 0.0, 0.0, s1=0.7), TetherProperties(omega=0.05), "origin")
        assert t.Tv == pytest.approx(0.035)

    def test_bad_side(self):
        with pytest.raises(ValueError):
            end_tensions(UNIT, TetherProperties(), "middle")

    @given(st.floats(0, 100), st.floats(0, 100), st.floats(0.01, 10))
    def test_magnitude(self, a, s, omega):
        t = end_tensions(CatenaryParams(a, 0.0, 0.0, s2=s), TetherProperties(omega=omega))
        assert t.mag**2 == pytest.approx(t.H**2 + t.Tv**2, rel=1e-12)

    def test_decompose(self):
        assert decompose_horizontal(0.05, 0.0) == (0.05, 0.0)
        tx, ty = decompose_horizontal(0.05, math.pi / 2)
        assert tx == pytest.approx(0.0, abs=1e-15)
        assert ty == 0.05
        assert decompose_horizontal(1.0, math.pi / 4) == pytest.approx((0.7071068, 0.7071068), abs=1e-7)

    def test_compose(self):
        assert compose_horizontal(0.05, 0.0) == (0.05, 0.0)
        assert compose_horizontal(0.0, 0.0) == (0.0, 0.0)
        H, beta = compose_horizontal(0.03, 0.04)
        assert H == pytest.approx(0.05)
        assert beta == pytest.approx(math.atan2(4, 3))

    @given(st.floats(1e-6, 1e3), st.floats(-10, 10))
    def test_round_trip(self, H, beta):
        H2, b2 = compose_horizontal(*decompose_horizontal(H, beta))
        assert H2 == pytest.approx(H, rel=1e-12)
        d = (b2 - beta) % (2 * math.pi)
        assert min(d, 2 * math.pi - d) < 1e-9


class TestInitialGuess:
    def test_close_to_converged(self):
        a0 = initial_guess_a(0.5, 0.1, 1.3)
        a = catenary_a(0.0, 0.0, 1.0, 0.1, 1.3)
        assert abs(a0 - a) / a < 0.25

    def test_near_taut(self):
        L = 1.02 * math.hypot(1.0, 0.1)
        a0 = initial_guess_a(0.5, 0.1, L)
        assert 0 < a0 < math.inf
        assert abs(a0 - catenary_a(0.0, 0.0, 1.0, 0.1, L)) / a0 < 0.25

    @given(st.floats(0.01, 10), st.floats(-5, 5), st.floats(1.001, 20))
    def test_positive(self, dx, dY, ratio):
        assume(abs(dY) > 1e-6)
        L = ratio * math.hypot(2 * dx, dY)
        assert initial_guess_a(dx, dY, L) > 0

    def test_rejects_level(self):
        with pytest.raises(ValueError):
            initial_guess_a(0.5, 0.0, 1.3)

    def test_no_root_when_short(self):
        with pytest.raises(NoPhysicalRoot):
            initial_guess_a(0.5, 0.1, 0.9)


class TestSolver:
    def test_reference_case(self):
        tether = TetherProperties(s_total=1.6)
        p1, p2 = Point2(0, 0), Point2(1.0, 0.5)
        p = solve_from_endpoints(p1, p2, tether)
        assert abs(eval_height(p, 0.0) - 0.0) < 1e-9
        assert abs(eval_height(p, 1.0) - 0.5) < 1e-9
        assert abs(p.s1 + p.s2 - 1.6) < 1e-9
        assert (p.a, p.x0, p.C) == pytest.approx((A_REF, X0_REF, C_REF), rel=1e-9)

    def test_level_ends(self):
        p = solve_from_endpoints(Point2(0, 0), Point2(1, 0), TetherProperties(s_total=1.2))
        assert p.x0 == 0.5
        assert p.a == pytest.approx(A_LEVEL_REF, rel=1e-9)
        assert p.s1 == pytest.approx(0.6)

    def test_too_short(self):
        with pytest.raises(TooShort):
            solve_from_endpoints(Point2(0, 0), Point2(1, 0.5), TetherProperties(s_total=1.118))

    def test_vertical_span(self):
        with pytest.raises(CatenaryError):
            solve_from_endpoints(Point2(0, 0), Point2(0, 0.5), TetherProperties(s_total=1.0))

    def test_virtual_minimum_rejected(self):
        # steep and nearly taut: lowest point lies left of the anchor
        with pytest.raises(CatenaryError):
            solve_from_endpoints(Point2(0, 0), Point2(0.3, 1.0), TetherProperties(s_total=1.05))

    def test_no_convergence_reports_residual(self):
        with pytest.raises(NoConvergence) as err:
            solve_parameter_a(0.5, 0.1, 1.3, SolverSettings(tol=1e-15, max_iter=1))
        assert err.value.residual > 0

    def test_bisection_fallback(self):
        # a far-off starting value throws Newton out of its bracket
        r = solve_parameter_a(0.5, 0.1, 1.3, a0=50.0)
        assert r.a == pytest.approx(catenary_a(0, 0, 1, 0.1, 1.3), rel=1e-8)

    def test_small_dy_uses_level_branch(self):
        s = SolverSettings(dy_epsilon=1e-3)
        p = solve_from_endpoints(Point2(0, 0), Point2(1, 1e-4), TetherProperties(s_total=1.2), s)
        assert np.max(np.abs(system_residuals(p, Point2(0, 0), Point2(1, 1e-4), TetherProperties(s_total=1.2)))) < 1e-9

    @given(
        st.floats(0.05, 10),
        st.floats(-2, 2),
        st.floats(-3, 3),
        st.floats(0.1, 3),
        st.floats(0.1, 3),
    )
    def test_recovers_generated_curve(self, a, x0, C, u1, u2):
        x1, x2 = x0 - a * u1, x0 + a * u2
        p = CatenaryParams(a, x0, C)
        y1, y2 = float(eval_height(p, x1)), float(eval_height(p, x2))
        L = float(arc_length_from_lowest(p, x1) + arc_length_from_lowest(p, x2))
        r = solve_from_endpoints(Point2(x1, y1), Point2(x2, y2), TetherProperties(s_total=L))
        assert r.a == pytest.approx(a, rel=1e-6)
        assert r.x0 == pytest.approx(x0, rel=1e-6, abs=1e-6 * a)
        assert r.C == pytest.approx(C, rel=1e-6, abs=1e-6 * a)

    @given(st.floats(0.05, 3), st.floats(-3, 3), st.floats(1.01, 3))
    def test_residual_contract(self, dx, dY, ratio):
        p1, p2 = Point2(0.0, 0.0), Point2(2 * dx, dY)
        tether = TetherProperties(s_total=ratio * math.hypot(2 * dx, dY))
        try:
            p = solve_from_endpoints(p1, p2, tether)
        except CatenaryError as exc:
            assume(not isinstance(exc, (TooShort, NoConvergence)))
            return
        tol = SolverSettings().tol
        assert np.all(np.abs(system_residuals(p, p1, p2, tether)) <= tol)
        assert p.a > 0 and p.s1 >= 0 and p.s2 >= 0

    @given(st.floats(0.1, 3), st.floats(-1, 1), st.floats(1.05, 2), st.floats(0.01, 0.5))
    def test_longer_tether_smaller_a(self, dx, dY, ratio, extra):
        chord = math.hypot(2 * dx, dY)
        a_short = solve_parameter_a(dx, dY, ratio * chord).a
        a_long = solve_parameter_a(dx, dY, (ratio + extra) * chord).a
        assert a_long < a_short

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            TetherProperties(omega=0.0)
        with pytest.raises(ValueError):
            Point2(math.nan, 0.0)
        with pytest.raises(ValueError):
            SolverSettings(tol=0.0)
