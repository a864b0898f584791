"""
Tests for the equations of motion, ground contact and integration.
"""

from dataclasses import replace
import math

import numpy as np
import pytest

from src.errors import NonFiniteStateError
from src.model.params import FrictionModel, Integrator, SimSettings
from src.physics.dynamics import (
    EnergyLedger,
    advance,
    compute_accelerations,
    contact_force,
    energy_flows,
    get_leg_model,
    linear_momentum,
    resting_state,
    step,
    total_energy,
    update_anchor,
)
from src.physics.elastics import selda_state
from src.physics.kinematics import JointState, forward_kinematics
from src.physics.state import ActuatorCommand, AppliedTorques, ContactPoint


def moving_state(params, settings, rates, vx=0.5, vy=0.2):
    """Resting pose with the given joint rates and trunk velocity."""
    rest = resting_state(params, settings)
    joints = JointState(rest.joints.joint_angles, np.asarray(rates, dtype=float))
    return rest.evolve(vx=vx, vy=vy, joints=joints)


def contact_at(x=0.0, y=-0.001, vx=0.0, vy=0.0, anchor_x=None):
    return ContactPoint(position=np.array([x, y]), velocity=np.array([vx, vy]),
                        penetration=max(0.0, -y), anchor_x=anchor_x)


def run_for(s, params, settings, duration):
    n_steps = int(round(duration / settings.physics_dt))
    return advance(s, ActuatorCommand(), params, settings, n_steps)


class TestContactForce:
    def test_spring_force(self):
        settings = SimSettings(contact_stiffness=5000.0)
        assert contact_force(contact_at(), settings) == pytest.approx((5.0, 0.0))

    def test_above_ground(self):
        assert contact_force(contact_at(y=0.002), SimSettings()) == (0.0, 0.0)

    def test_separating_tip_is_not_pulled(self):
        settings = SimSettings(contact_stiffness=5000.0)
        assert contact_force(contact_at(vy=1.0), settings) == (0.0, 0.0)

    def test_damping_adds_while_penetrating(self):
        settings = SimSettings(contact_stiffness=5000.0, contact_damping=100.0)
        normal, _ = contact_force(contact_at(vy=-0.01), settings)
        assert normal == pytest.approx(6.0)

    def test_regularized_friction_opposes_sliding(self):
        settings = SimSettings(contact_stiffness=5000.0)
        normal, tangential = contact_force(contact_at(vx=1.0), settings)
        assert tangential < 0
        assert abs(tangential) <= settings.friction_coefficient * normal

    def test_anchored_friction_saturates(self):
        settings = SimSettings(contact_stiffness=5000.0, friction_model=FrictionModel.ANCHORED)
        _, tangential = contact_force(contact_at(x=0.001, anchor_x=0.0), settings)
        assert tangential == pytest.approx(-4.0)

    def test_anchored_friction_sticks(self):
        settings = SimSettings(contact_stiffness=5000.0, friction_model=FrictionModel.ANCHORED)
        _, tangential = contact_force(contact_at(x=1e-4, anchor_x=0.0), settings)
        assert tangential == pytest.approx(-2.0)


class TestAnchor:
    def test_regularized_has_no_anchor(self):
        assert update_anchor(contact_at(anchor_x=0.0), SimSettings()) is None

    def test_set_at_touchdown(self):
        settings = SimSettings(friction_model=FrictionModel.ANCHORED)
        assert update_anchor(contact_at(x=0.3), settings) == 0.3

    def test_cleared_at_liftoff(self):
        settings = SimSettings(friction_model=FrictionModel.ANCHORED)
        assert update_anchor(contact_at(y=0.01, anchor_x=0.0), settings) is None

    def test_follows_sliding_tip(self):
        settings = SimSettings(contact_stiffness=5000.0, friction_model=FrictionModel.ANCHORED)
        anchor = update_anchor(contact_at(x=0.001, anchor_x=0.0), settings)
        assert anchor == pytest.approx(0.001 - 4.0 / settings.tangential_stiffness)

    def test_kept_while_sticking(self):
        settings = SimSettings(contact_stiffness=5000.0, friction_model=FrictionModel.ANCHORED)
        assert update_anchor(contact_at(x=1e-4, anchor_x=0.0), settings) == 0.0


class TestRestingState:
    def test_clearance(self, params_b, settings):
        s = resting_state(params_b, settings)
        tip = forward_kinematics(s.joints, params_b).tip
        assert s.y + tip[1] == pytest.approx(0.005)
        assert not s.contact
        assert s.t == 0.0

    def test_selda_only_with_foot(self, params_a, params_b, settings):
        assert resting_state(params_a, settings).selda is None
        selda = resting_state(params_b, settings).selda
        assert selda.motor_angle == 0.0
        assert selda.deflection == pytest.approx(0.0)

    def test_stored_energy_zero_at_rest(self, params_a, params_b):
        settings = SimSettings(gravity=0.0, contact_enabled=False)
        assert total_energy(resting_state(params_a, settings), params_a, settings) == pytest.approx(0.0, abs=1e-12)
        assert total_energy(resting_state(params_b, settings), params_b, settings) == pytest.approx(0.0, abs=1e-12)


class TestAccelerations:
    def test_free_fall(self, params_a, flight_settings):
        s = resting_state(params_a, flight_settings)
        acc = compute_accelerations(s, AppliedTorques(), params_a, flight_settings)
        np.testing.assert_allclose(acc, [0.0, -9.81, 0.0, 0.0, 0.0], atol=1e-9)

    def test_selda_bias_acts_at_rest(self, params_b, flight_settings):
        s = resting_state(params_b, flight_settings)
        acc = compute_accelerations(s, AppliedTorques(), params_b, flight_settings)
        assert acc.size == 7
        assert acc[-1] < 0

    def test_hip_torque_saturated(self, params_a, flight_settings):
        s = resting_state(params_a, flight_settings)
        limit = params_a.hip_torque_limit
        saturated = compute_accelerations(s, AppliedTorques(hip=limit), params_a, flight_settings)
        beyond = compute_accelerations(s, AppliedTorques(hip=10 * limit), params_a, flight_settings)
        np.testing.assert_allclose(beyond, saturated)


class TestConservation:
    def test_momentum_without_gravity(self, undamped_a):
        settings = SimSettings(integrator=Integrator.RK4, contact_enabled=False, gravity=0.0)
        s0 = moving_state(undamped_a, settings, [1.0, -2.0, 1.5])
        s1 = run_for(s0, undamped_a, settings, 0.1)
        np.testing.assert_allclose(linear_momentum(s1, undamped_a), linear_momentum(s0, undamped_a),
                                   rtol=1e-8, atol=1e-12)

    def test_energy_without_dissipation(self, undamped_a):
        settings = SimSettings(integrator=Integrator.RK4, contact_enabled=False, gravity=0.0)
        s0 = moving_state(undamped_a, settings, [0.5, -0.5, 0.3])
        e0 = total_energy(s0, undamped_a, settings)
        s1 = run_for(s0, undamped_a, settings, 1.0)
        assert total_energy(s1, undamped_a, settings) == pytest.approx(e0, rel=1e-6)

    @pytest.mark.slow
    def test_energy_over_ten_seconds(self, undamped_a):
        settings = SimSettings(integrator=Integrator.RK4, contact_enabled=False, gravity=0.0)
        s0 = moving_state(undamped_a, settings, [0.5, -0.5, 0.3])
        e0 = total_energy(s0, undamped_a, settings)
        s1 = run_for(s0, undamped_a, settings, 10.0)
        assert s1.t == pytest.approx(10.0)
        assert total_energy(s1, undamped_a, settings) == pytest.approx(e0, rel=1e-7)

    def test_ledger_books_damping(self, params_a):
        settings = SimSettings(integrator=Integrator.RK4, contact_enabled=False, gravity=0.0)
        s0 = moving_state(params_a, settings, [2.0, -2.0, 1.0])
        ledger = EnergyLedger()
        s1 = advance(s0, ActuatorCommand(), params_a, settings, 2000, ledger)
        lost = total_energy(s0, params_a, settings) - total_energy(s1, params_a, settings)
        assert ledger.actuator_work == 0.0
        assert lost > 0
        assert ledger.dissipated == pytest.approx(lost, rel=1e-3)

    def test_power_balance_in_stance(self, params_b):
        settings = SimSettings(integrator=Integrator.RK4, physics_dt=1e-6, control_dt=1e-6)
        rest = resting_state(params_b, settings)
        angles = rest.joints.joint_angles.copy()
        angles[3] = math.radians(170.0)
        joints = JointState(angles, np.array([0.4, -0.8, 0.5, 1.2]))
        tip = forward_kinematics(JointState.at_rest(angles), params_b).tip
        s = rest.evolve(y=-0.002 - float(tip[1]), vx=0.2, vy=-0.3, joints=joints,
                        selda=selda_state(0.5, 0.4, 0.3, angles[3], params_b))
        command = ActuatorCommand(hip_torque=1.0, ankle_torque=0.3)

        forward = advance(s, command, params_b, settings)
        backward = advance(s, command, params_b, replace(settings, physics_dt=-1e-6))
        rate = (total_energy(forward, params_b, settings)
                - total_energy(backward, params_b, settings)) / 2e-6

        flows = energy_flows(s, AppliedTorques(hip=1.0, motor=0.3), params_b, settings)
        assert flows.damping <= 0
        assert rate == pytest.approx(flows.total, rel=1e-5, abs=1e-6)


class TestIntegrators:
    @staticmethod
    def final_positions(params, integrator, dt, duration=0.1):
        settings = SimSettings(integrator=integrator, physics_dt=dt, control_dt=dt, contact_enabled=False)
        s0 = moving_state(params, settings, [1.0, -1.0, 0.5])
        return run_for(s0, params, settings, duration).positions()

    def test_rk4_fourth_order(self, params_a):
        reference = self.final_positions(params_a, Integrator.RK4, 5e-4 / 64)
        coarse = np.linalg.norm(self.final_positions(params_a, Integrator.RK4, 5e-4) - reference)
        fine = np.linalg.norm(self.final_positions(params_a, Integrator.RK4, 2.5e-4) - reference)
        assert 10.0 < coarse / fine < 22.0

    def test_semi_implicit_euler_first_order(self, params_a):
        reference = self.final_positions(params_a, Integrator.RK4, 1e-5)
        coarse = np.linalg.norm(self.final_positions(params_a, Integrator.SEMI_IMPLICIT_EULER, 2e-4) - reference)
        fine = np.linalg.norm(self.final_positions(params_a, Integrator.SEMI_IMPLICIT_EULER, 1e-4) - reference)
        assert 1.6 < coarse / fine < 2.5

    def test_deterministic(self, params_b, settings):
        s0 = resting_state(params_b, settings)
        command = ActuatorCommand(hip_torque=0.5, ankle_torque=0.2)
        first = advance(s0, command, params_b, settings, 200)
        second = advance(s0, command, params_b, settings, 200)
        np.testing.assert_array_equal(first.positions(), second.positions())
        np.testing.assert_array_equal(first.velocities(), second.velocities())

    def test_step_is_single_advance(self, params_a, settings):
        s0 = resting_state(params_a, settings)
        command = ActuatorCommand(hip_torque=0.5)
        np.testing.assert_array_equal(step(s0, command, params_a, settings).positions(),
                                      advance(s0, command, params_a, settings, 1).positions())

    def test_time_advances(self, params_a, settings):
        s = advance(resting_state(params_a, settings), ActuatorCommand(), params_a, settings, 10)
        assert s.t == pytest.approx(10 * settings.physics_dt)

    def test_motor_lag(self, params_b, flight_settings):
        s0 = resting_state(params_b, flight_settings)
        s1 = advance(s0, ActuatorCommand(ankle_torque=1.0), params_b, flight_settings, 10)
        expected = 1.0 - math.exp(-10 * flight_settings.physics_dt / params_b.motor_lag)
        assert s1.selda.commanded_torque == pytest.approx(expected)

    def test_non_finite_state(self, params_a, settings):
        s = resting_state(params_a, settings).evolve(vx=float('nan'))
        with pytest.raises(NonFiniteStateError) as info:
            advance(s, ActuatorCommand(), params_a, settings, 5)
        assert info.value.diagnostics['t'] == pytest.approx(settings.physics_dt)
        assert info.value.diagnostics['integrator'] == Integrator.SEMI_IMPLICIT_EULER.value


class TestStaticStance:
    def test_weight_on_tip_holds_center_of_mass(self, params_a, settings):
        rest = resting_state(params_a, settings)
        tip = forward_kinematics(rest.joints, params_a).tip
        penetration = params_a.total_mass * settings.gravity / settings.contact_stiffness
        s = rest.evolve(y=-penetration - float(tip[1]))

        normal, tangential = contact_force(get_leg_model(params_a).contact_point(s.positions(), s.velocities(), None),
                                           settings)
        assert normal == pytest.approx(params_a.total_mass * settings.gravity)
        assert tangential == 0.0

        acc = compute_accelerations(s, AppliedTorques(), params_a, settings)
        n = acc.size
        center_of_mass_acc = get_leg_model(params_a).mass_matrix(s.positions()[2:n])[:2] @ acc / params_a.total_mass
        np.testing.assert_allclose(center_of_mass_acc, [0.0, 0.0], atol=1e-9)

    def test_half_load_accelerates_downward(self, params_a, settings):
        rest = resting_state(params_a, settings)
        tip = forward_kinematics(rest.joints, params_a).tip
        penetration = 0.5 * params_a.total_mass * settings.gravity / settings.contact_stiffness
        s = rest.evolve(y=-penetration - float(tip[1]))

        acc = compute_accelerations(s, AppliedTorques(), params_a, settings)
        n = acc.size
        center_of_mass_acc = get_leg_model(params_a).mass_matrix(s.positions()[2:n])[:2] @ acc / params_a.total_mass
        assert center_of_mass_acc[1] == pytest.approx(-0.5 * settings.gravity)


class TestBallisticFlight:
    VX, VY, DURATION = 0.8, 1.2, 0.5

    def fly(self, params, integrator):
        settings = SimSettings(integrator=integrator, contact_enabled=False)
        s0 = resting_state(params, settings).evolve(vx=self.VX, vy=self.VY)
        return settings, s0, run_for(s0, params, settings, self.DURATION)

    def test_rk4_follows_parabola(self, params_a):
        settings, s0, s1 = self.fly(params_a, Integrator.RK4)
        t, g = s1.t, settings.gravity
        assert t == pytest.approx(self.DURATION)
        assert s1.x == pytest.approx(s0.x + self.VX * t, abs=1e-9)
        assert s1.y == pytest.approx(s0.y + self.VY * t - 0.5 * g * t ** 2, abs=1e-9)
        assert s1.vy == pytest.approx(self.VY - g * t, abs=1e-9)

    def test_semi_implicit_euler_lags_by_half_step(self, params_a):
        settings, s0, s1 = self.fly(params_a, Integrator.SEMI_IMPLICIT_EULER)
        t, g, dt = s1.t, settings.gravity, settings.physics_dt
        assert s1.x == pytest.approx(s0.x + self.VX * t, abs=1e-9)
        assert s1.y == pytest.approx(s0.y + self.VY * t - 0.5 * g * t ** 2 - 0.5 * g * dt * t, abs=1e-9)

    def test_leg_keeps_its_pose(self, params_a):
        _, s0, s1 = self.fly(params_a, Integrator.RK4)
        np.testing.assert_allclose(s1.joints.joint_angles, s0.joints.joint_angles, atol=1e-9)
