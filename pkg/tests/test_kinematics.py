"""
Tests for leg kinematics and the boom mapping.
"""

from dataclasses import replace
import math

import numpy as np
import pytest

from src.model.params import degenerate_config_b
from src.physics.kinematics import (
    BoomState,
    JointState,
    PlanarState,
    absolute_angles,
    biarticular_deflection,
    boom_to_plane,
    forward_kinematics,
    neutral_hip_angle,
    plane_to_boom,
    resting_joint_state,
    tip_jacobian,
    tip_velocity,
    virtual_leg,
)


def random_state(rng, n_segments):
    angles = np.concatenate(([rng.uniform(-0.6, 0.6)], rng.uniform(0.5, math.pi, n_segments - 1)))
    return JointState(angles, rng.normal(size=n_segments))


class TestForwardKinematics:
    def test_straight_leg_config_b(self, params_b):
        q = JointState.at_rest([0.0, math.pi, math.pi, math.pi])
        pose = forward_kinematics(q, params_b)
        np.testing.assert_allclose(pose.tip, [0.0, -0.520], atol=1e-12)
        assert pose.virtual_leg_length == pytest.approx(0.520)
        assert pose.virtual_leg_angle == pytest.approx(0.0)

    def test_single_segment(self, params_a):
        params = replace(params_a, segment_lengths=(0.150,), resting_joint_angles=())
        pose = forward_kinematics(JointState.at_rest([0.0]), params)
        np.testing.assert_allclose(pose.tip, [0.0, -0.150], atol=1e-12)

    def test_resting_length_near_calibration_target(self, params_a):
        q = JointState.at_rest([0.0, *params_a.resting_joint_angles])
        length, _ = virtual_leg(q, params_a)
        assert length == pytest.approx(params_a.leg_resting_length, rel=0.05)

    def test_positive_hip_angle_points_backward(self, params_a):
        q = JointState.at_rest([0.3, math.pi, math.pi])
        pose = forward_kinematics(q, params_a)
        assert pose.tip[0] < 0
        assert pose.virtual_leg_angle == pytest.approx(0.3)

    def test_joint_count(self, params_b):
        pose = forward_kinematics(JointState.at_rest([0.0, *params_b.resting_joint_angles]), params_b)
        assert pose.joints.shape == (5, 2)
        np.testing.assert_allclose(pose.joints[0], [0.0, 0.0])

    def test_dimension_mismatch(self, params_b):
        with pytest.raises(ValueError):
            forward_kinematics(JointState.at_rest([0.0, 2.0, 2.5]), params_b)

    def test_joints_flex_to_one_side(self, params_a):
        phi = absolute_angles(np.array([0.0, math.radians(130.0), math.radians(160.0)]))
        np.testing.assert_allclose(phi, [0.0, math.radians(-50.0), math.radians(-70.0)])

    def test_bent_leg_tip_ahead_of_vertical_femur(self, params_a):
        pose = forward_kinematics(resting_joint_state(params_a), params_a)
        np.testing.assert_allclose(pose.tip, [0.25586, -0.29772], atol=1e-5)

    def test_triangle_inequality(self, params_b):
        rng = np.random.default_rng(7)
        for _ in range(200):
            length, _ = virtual_leg(random_state(rng, 4), params_b)
            assert length <= sum(params_b.segment_lengths) + 1e-12


class TestNeutralHipAngle:
    @pytest.mark.parametrize('config, degrees', [('a', 40.68), ('b', 45.68)])
    def test_value(self, request, config, degrees):
        params = request.getfixturevalue(f'params_{config}')
        assert math.degrees(neutral_hip_angle(params)) == pytest.approx(degrees, abs=0.01)

    def test_tip_under_hip(self, params_b):
        pose = forward_kinematics(resting_joint_state(params_b, neutral_hip_angle(params_b)), params_b)
        assert pose.tip[0] == pytest.approx(0.0, abs=1e-12)
        assert pose.virtual_leg_angle == pytest.approx(0.0, abs=1e-12)
        assert pose.tip[1] < 0

    def test_degenerate_foot_keeps_angle(self, params_a):
        params = degenerate_config_b(params_a)
        assert neutral_hip_angle(params) == pytest.approx(neutral_hip_angle(params_a), abs=1e-8)


class TestJacobian:
    def test_matches_finite_difference(self, params_b):
        rng = np.random.default_rng(11)
        h = 1e-6
        for _ in range(20):
            q = random_state(rng, 4)
            analytic = tip_jacobian(q.joint_angles, params_b)
            numeric = np.empty_like(analytic)
            for k in range(q.joint_angles.size):
                step = np.zeros(q.joint_angles.size)
                step[k] = h
                plus = forward_kinematics(JointState.at_rest(q.joint_angles + step), params_b).tip
                minus = forward_kinematics(JointState.at_rest(q.joint_angles - step), params_b).tip
                numeric[:, k] = (plus - minus) / (2 * h)
            np.testing.assert_allclose(analytic, numeric, rtol=1e-6, atol=1e-9)

    def test_tip_velocity(self, params_a):
        q = JointState(np.array([0.1, 2.0, 2.6]), np.array([1.0, -0.5, 0.3]))
        expected = tip_jacobian(q.joint_angles, params_a) @ q.joint_velocities
        np.testing.assert_allclose(tip_velocity(q, params_a), expected)


class TestBiarticular:
    def test_resting_pose(self, params_a):
        q = JointState.at_rest([0.0, *params_a.resting_joint_angles])
        assert biarticular_deflection(q, params_a) == pytest.approx(0.0)

    def test_knee_flexion(self, params_a):
        alpha0, beta0 = params_a.resting_joint_angles
        q = JointState.at_rest([0.0, alpha0 - 0.1, beta0])
        assert biarticular_deflection(q, params_a) == pytest.approx(0.003)

    def test_symmetric_cancellation(self, params_a):
        alpha0, beta0 = params_a.resting_joint_angles
        q = JointState.at_rest([0.0, alpha0 + 0.1, beta0 - 0.1])
        assert biarticular_deflection(q, params_a) == pytest.approx(0.0, abs=1e-15)


class TestBoomMapping:
    def test_full_revolution(self):
        planar = boom_to_plane(BoomState(theta_h=2 * math.pi, theta_v=0.0), 1.55)
        assert planar.x == pytest.approx(9.739, abs=1e-3)
        assert planar.x == pytest.approx(9.73, abs=0.01)

    def test_origin(self):
        planar = boom_to_plane(BoomState(0.0, 0.0), 1.55)
        assert (planar.x, planar.y) == (0.0, 0.0)

    def test_height(self):
        assert boom_to_plane(BoomState(0.0, 0.1), 1.55).y == pytest.approx(0.15474, abs=1e-5)

    def test_odd_symmetry(self):
        a = boom_to_plane(BoomState(0.4, 0.2), 1.55)
        b = boom_to_plane(BoomState(-0.4, -0.2), 1.55)
        assert b.x == -a.x
        assert b.y == -a.y

    def test_velocities(self):
        planar = boom_to_plane(BoomState(0.0, 0.1, theta_h_rate=0.5, theta_v_rate=0.2), 1.55)
        assert planar.vx == pytest.approx(0.775)
        assert planar.vy == pytest.approx(1.55 * math.cos(0.1) * 0.2)

    def test_inverse(self):
        boom = BoomState(1.3, 0.05, 0.7, -0.1)
        back = plane_to_boom(boom_to_plane(boom, 1.55), 1.55)
        assert back.theta_h == pytest.approx(boom.theta_h)
        assert back.theta_v == pytest.approx(boom.theta_v)
        assert back.theta_h_rate == pytest.approx(boom.theta_h_rate)
        assert back.theta_v_rate == pytest.approx(boom.theta_v_rate)

    def test_out_of_reach(self):
        with pytest.raises(ValueError):
            plane_to_boom(PlanarState(0.0, 2.0), 1.55)

    def test_invalid_radius(self):
        with pytest.raises(ValueError):
            boom_to_plane(BoomState(0.0, 0.0), 0.0)
