import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tethermav.catenary import TetherProperties
from tethermav.tension import (
    Attitude,
    ImuSample,
    QuadParams,
    TensionVec,
    accel_world_z,
    bench_horizontal_gt,
    bench_vertical_gt,
    horizontal_tension_components,
    observe_tension,
    rotation_world_from_body,
    thrust_direction,
    vertical_tension,
)

QP = QuadParams()
angle = st.floats(-1.4, 1.4)
attitudes = st.builds(Attitude, angle, angle, st.floats(-math.pi, math.pi))
vec3 = st.lists(st.floats(-50, 50), min_size=3, max_size=3)


def _rx(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])


def _ry(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def _rz(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


class TestRotation:
    def test_identity(self):
        assert np.array_equal(rotation_world_from_body(Attitude()), np.eye(3))

    def test_pure_yaw(self):
        R = rotation_world_from_body(Attitude(psi=0.7))
        assert np.allclose(R, _rz(0.7), atol=1e-15)

    @given(attitudes)
    def test_matches_elementary_product(self, att):
        expected = _rz(att.psi) @ _ry(att.phi) @ _rx(att.theta)
        assert np.allclose(rotation_world_from_body(att), expected, atol=1e-14)

    @given(attitudes)
    def test_orthonormal(self, att):
        R = rotation_world_from_body(att)
        assert np.allclose(R @ R.T, np.eye(3), atol=1e-12)
        assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)

    @given(attitudes)
    def test_third_row(self, att):
        R = rotation_world_from_body(att)
        f, t = att.phi, att.theta
        assert np.allclose(R[2], [-math.sin(f), math.cos(f) * math.sin(t), math.cos(f) * math.cos(t)], atol=1e-15)

    def test_thrust_column_random_attitudes(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            f, t, p = rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4), rng.uniform(-math.pi, math.pi)
            att = Attitude(f, t, p)
            fp = rng.uniform(0, 2)
            col = rotation_world_from_body(att)[:, 2] * fp
            assert abs(col[2] - math.cos(t) * math.cos(f) * fp) < 1e-12
            tx, ty = horizontal_tension_components(att, fp)
            # the horizontal tension balances the horizontal thrust
            assert abs(col[0] + tx) < 1e-12
            assert abs(col[1] + ty) < 1e-12
            assert np.allclose(thrust_direction(att) * fp, col, atol=1e-12)


class TestAccelZ:
    def test_level(self):
        assert accel_world_z(Attitude(), (0, 0, 9.81)) == 9.81

    def test_pure_roll(self):
        assert accel_world_z(Attitude(phi=math.pi / 2), (1, 0, 0)) == pytest.approx(-1.0)

    @given(attitudes, vec3)
    def test_matches_rotation(self, att, acc):
        expected = (rotation_world_from_body(att) @ np.array(acc))[2]
        assert accel_world_z(att, acc) == pytest.approx(expected, abs=1e-12)


class TestObservation:
    def test_hover_no_tether(self):
        s = ImuSample(0.0, (0, 0, QP.g), Attitude(), QP.mass * QP.g)
        assert np.allclose(observe_tension(s, QP), 0.0, atol=1e-15)

    def test_extra_thrust_means_downward_pull(self):
        s = ImuSample(0.0, (0, 0, QP.g), Attitude(), QP.mass * QP.g + 0.05)
        assert np.allclose(observe_tension(s, QP), (0, 0, -0.05), atol=1e-15)

    @given(st.floats(-0.4, 0.4), st.floats(-0.4, 0.4), st.floats(-math.pi, math.pi), st.floats(0.1, 1.0))
    def test_tilted_equilibrium(self, phi, theta, psi, fp):
        # static with a tether balancing the thrust: measured specific force is g*e3 in the world
        att = Attitude(phi, theta, psi)
        R = rotation_world_from_body(att)
        accel_body = R.T @ np.array([0.0, 0.0, QP.g])
        t = observe_tension(ImuSample(0.0, accel_body, att, fp), QP)
        tx, ty = horizontal_tension_components(att, fp)
        assert t.tx == pytest.approx(tx, abs=1e-12)
        assert t.ty == pytest.approx(ty, abs=1e-12)
        a_z = accel_world_z(att, accel_body)
        assert t.tz == pytest.approx(vertical_tension(att, a_z, fp, QP), abs=1e-12)

    @given(attitudes, vec3, vec3, st.floats(0, 2), st.floats(0, 2), vec3, vec3)
    def test_linear(self, att, a1, a2, f1, f2, e1, e2):
        def obs(acc, fp, fext):
            return observe_tension(ImuSample(0.0, acc, att, fp), QuadParams(f_ext=tuple(fext))).as_array()

        total = obs(np.add(a1, a2), f1 + f2, np.add(e1, e2))
        parts = obs(a1, f1, e1) + obs(a2, f2, e2)
        assert np.allclose(total, parts, atol=1e-11)

    def test_sample_rejects_negative_thrust(self):
        with pytest.raises(ValueError):
            ImuSample(0.0, (0, 0, 0), Attitude(), -0.1)


class TestVertical:
    def test_hover_with_hanging_tether(self):
        omega, z = 0.0478, 1.0
        fp = QP.mass * QP.g + omega * z
        assert vertical_tension(Attitude(), QP.g, fp, QP) == pytest.approx(-omega * z)

    def test_weight_arithmetic(self):
        assert vertical_tension(Attitude(), 9.81, 0.3237, QuadParams(mass=0.033)) == pytest.approx(0.0, abs=1e-4)

    def test_resting_on_ground(self):
        tv = vertical_tension(Attitude(), QP.g, 0.0, QP)
        assert abs(tv) == pytest.approx(0.3, abs=0.03)


class TestHorizontal:
    def test_level(self):
        assert horizontal_tension_components(Attitude(), 0.5) == (0.0, 0.0)

    def test_small_pitch(self):
        tx, ty = horizontal_tension_components(Attitude(theta=0.01), 0.4)
        assert tx == pytest.approx(0.0, abs=1e-15)
        assert ty == pytest.approx(0.01 * 0.4, rel=1e-4)


class TestBench:
    def test_level_arm(self):
        assert bench_horizontal_gt(0.02, 1.0, 1.0, 0.5) == 0.02

    def test_45_degrees(self):
        assert bench_horizontal_gt(0.02, 1.5, 1.0, 0.5) == pytest.approx(0.02 / math.sqrt(2))

    def test_coin_weight(self):
        assert 0.0023 * 9.81 == pytest.approx(0.0226, abs=1e-4)

    def test_rq_positive(self):
        with pytest.raises(ValueError):
            bench_horizontal_gt(0.02, 1.0, 1.0, 0.0)

    def test_vertical(self):
        t = TetherProperties(omega=0.05)
        assert bench_vertical_gt(t, 0.0) == 0.0
        assert bench_vertical_gt(t, 1.3) == pytest.approx(0.065)
        assert bench_vertical_gt(t, 0.3) == pytest.approx(0.015)
        with pytest.raises(ValueError):
            bench_vertical_gt(t, -0.1)


class TestTypes:
    def test_tension_vec(self):
        t = TensionVec(3.0, 4.0, -12.0)
        assert t.norm() == 13.0
        assert t.horizontal() == 5.0
        assert TensionVec.from_array(t.as_array()) == t

    def test_quad_params(self):
        assert QuadParams().weight == pytest.approx(0.033 * 9.81)
        with pytest.raises(ValueError):
            QuadParams(mass=0.0)
