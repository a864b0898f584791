"""
SELDA Sim - Leg Dynamics
Equations of motion of trunk and leg in the unrolled plane, tip contact with
the ground and fixed-step integration.

The leg is a planar serial chain hanging from the trunk. The boom fixes the
trunk pitch, so the generalized coordinates are the trunk position (x, y), the
absolute femur angle and the interior joint angles. Configuration B adds the
SELDA motor as one more coordinate, coupled to the foot only through the line.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple
import logging
import math

import numpy as np

from src.errors import MassMatrixError, NonFiniteStateError
from src.model.params import FrictionModel, Integrator, RobotParams, SimSettings
from src.physics.elastics import (
    biarticular_torques,
    elastic_energy,
    endstop_dissipation,
    endstop_torque,
    joint_limits,
    knee_torque,
    selda_deflection,
    selda_line_torque,
    selda_state,
)
from src.physics.kinematics import (
    JointState,
    absolute_angles,
    angle_map,
    biarticular_stretch,
    forward_kinematics,
    neutral_hip_angle,
    resting_joint_state,
)
from src.physics.state import ActuatorCommand, AppliedTorques, ContactPoint, SimState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnergyFlows:
    """Power entering the mechanical system [W]."""

    actuator: float                 # hip and SELDA motor
    damping: float                  # parasitic joint, motor and end-stop damping, <= 0
    contact: float                  # ground damping and friction, <= 0 for the default law

    @property
    def total(self) -> float:
        return self.actuator + self.damping + self.contact


@dataclass
class EnergyLedger:
    """Work accumulated since the start of a trial [J]."""

    actuator_work: float = 0.0
    damping_work: float = 0.0
    contact_work: float = 0.0

    @property
    def dissipated(self) -> float:
        """Energy removed by damping and ground contact, positive when lost."""
        return -(self.damping_work + self.contact_work)


class LegModel:
    """
    Mass distribution and constant matrices of one leg design.

    Each segment is a uniform rod with its mass at mid-length; the trunk mass
    sits at the hip. Absolute segment angles phi relate to the joint angles
    through a constant matrix, so the mass matrix is assembled in absolute
    coordinates and mapped once per evaluation.
    """

    def __init__(self, params: RobotParams):
        self.params = params
        self.n_segments = params.n_segments
        self.n_coords = self.n_segments + 2
        self.has_motor = params.has_foot
        self.n_dof = self.n_coords + (1 if self.has_motor else 0)

        lengths = np.asarray(params.segment_lengths, dtype=float)
        masses = np.asarray(params.segment_masses, dtype=float)
        n = self.n_segments

        # offsets[i, j]: distance along segment j from the hip to the centre of segment i
        offsets = np.zeros((n, n))
        for i in range(n):
            offsets[i, :i] = lengths[:i]
            offsets[i, i] = 0.5 * lengths[i]

        self.lengths = lengths
        self.masses = masses
        self.total_mass = params.total_mass
        self.first_moments = masses @ offsets
        self.coupling = offsets.T @ np.diag(masses) @ offsets
        self.rod_inertia = masses * lengths ** 2 / 12.0

        self.coordinate_map = np.zeros((self.n_coords, self.n_coords))
        self.coordinate_map[:2, :2] = np.eye(2)
        self.coordinate_map[2:, 2:] = angle_map(n)

        self.joint_inertia = np.zeros(self.n_coords)
        self.joint_inertia[2] = params.hip_reflected_inertia
        self.joint_inertia[3:] = params.joint_armature

        self.lower_limit, self.upper_limits = joint_limits(params)

    # ==================== Mass Matrix and Bias Forces ====================

    def mass_matrix(self, joint_angles: np.ndarray) -> np.ndarray:
        """Mass matrix in the generalized coordinates [x, y, hip, interior angles]."""
        phi = absolute_angles(joint_angles)
        cos_phi, sin_phi = np.cos(phi), np.sin(phi)

        mass_abs = np.zeros((self.n_coords, self.n_coords))
        mass_abs[0, 0] = mass_abs[1, 1] = self.total_mass
        mass_abs[0, 2:] = mass_abs[2:, 0] = -self.first_moments * cos_phi
        mass_abs[1, 2:] = mass_abs[2:, 1] = self.first_moments * sin_phi
        mass_abs[2:, 2:] = self.coupling * np.cos(phi[:, None] - phi[None, :]) + np.diag(self.rod_inertia)

        g = self.coordinate_map
        return g.T @ mass_abs @ g + np.diag(self.joint_inertia)

    def bias_forces(self, joint_angles: np.ndarray, joint_rates: np.ndarray, gravity: float) -> np.ndarray:
        """Velocity-product and gravity forces, moved to the right-hand side."""
        phi = absolute_angles(joint_angles)
        phi_rate_sq = (self.coordinate_map[2:, 2:] @ joint_rates) ** 2
        sin_phi, cos_phi = np.sin(phi), np.cos(phi)

        forces = np.empty(self.n_coords)
        forces[0] = -np.dot(self.first_moments * sin_phi, phi_rate_sq)
        forces[1] = -np.dot(self.first_moments * cos_phi, phi_rate_sq) - self.total_mass * gravity
        forces[2:] = (self.coupling * np.sin(phi[None, :] - phi[:, None])) @ phi_rate_sq \
            - gravity * self.first_moments * sin_phi
        return self.coordinate_map.T @ forces

    def tip_force(self, joint_angles: np.ndarray, fx: float, fy: float) -> np.ndarray:
        """Generalized forces of a world-frame force applied at the tip."""
        phi = absolute_angles(joint_angles)
        forces = np.empty(self.n_coords)
        forces[0], forces[1] = fx, fy
        forces[2:] = self.lengths * (-np.cos(phi) * fx + np.sin(phi) * fy)
        return self.coordinate_map.T @ forces

    # ==================== Tip Kinematics ====================

    def tip(self, positions: np.ndarray, velocities: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """World position and velocity of the distal tip."""
        angles = positions[2:self.n_coords]
        rates = velocities[2:self.n_coords]
        phi = absolute_angles(angles)
        phi_rate = self.coordinate_map[2:, 2:] @ rates
        sin_phi, cos_phi = np.sin(phi), np.cos(phi)

        position = np.array([
            positions[0] - np.dot(self.lengths, sin_phi),
            positions[1] - np.dot(self.lengths, cos_phi),
        ])
        velocity = np.array([
            velocities[0] - np.dot(self.lengths * cos_phi, phi_rate),
            velocities[1] + np.dot(self.lengths * sin_phi, phi_rate),
        ])
        return position, velocity

    def contact_point(self, positions: np.ndarray, velocities: np.ndarray,
                      anchor_x: Optional[float] = None) -> ContactPoint:
        position, velocity = self.tip(positions, velocities)
        return ContactPoint(
            position=position,
            velocity=velocity,
            penetration=max(0.0, -float(position[1])),
            anchor_x=anchor_x,
        )

    # ==================== Passive Torques ====================

    def passive_torques(self, positions: np.ndarray, velocities: np.ndarray) -> Tuple[np.ndarray, float]:
        """
        Spring, damper and end-stop torques.

        Returns:
            Tuple of (torques on the interior joints, torque on the SELDA motor)
        """
        p = self.params
        angles = positions[3:self.n_coords]
        rates = velocities[3:self.n_coords]

        torques = -p.joint_damping * rates
        torques[0] = knee_torque(angles[0], rates[0], p)
        knee_bi, ankle_bi = biarticular_torques(biarticular_stretch(angles[0], angles[1], p), p)
        torques[0] += knee_bi
        torques[1] += ankle_bi

        for k, upper in enumerate(self.upper_limits):
            torques[k] += endstop_torque(angles[k], rates[k], self.lower_limit, upper,
                                         p.endstop_stiffness, p.endstop_damping)

        motor_torque = 0.0
        if self.has_motor:
            motor_angle = positions[self.n_coords]
            motor_rate = velocities[self.n_coords]
            line = selda_line_torque(selda_deflection(motor_angle, angles[2], p), p)
            torques[2] += p.selda_coupling_ratio * line
            motor_torque = -line - p.motor_damping * motor_rate + endstop_torque(
                motor_angle, motor_rate, 0.0, p.motor_stroke, p.endstop_stiffness, p.endstop_damping)
        return torques, motor_torque

    # ==================== Equations of Motion ====================

    def accelerations(self, positions: np.ndarray, velocities: np.ndarray, torques: AppliedTorques,
                      settings: SimSettings, anchor_x: Optional[float] = None) -> np.ndarray:
        """Generalized accelerations for flat position and velocity vectors."""
        n = self.n_coords
        angles = positions[2:n]
        mass = self.mass_matrix(angles)
        rhs = self.bias_forces(angles, velocities[2:n], settings.gravity)

        joint_torques, motor_torque = self.passive_torques(positions, velocities)
        rhs[2] += torques.hip
        rhs[3:] += joint_torques

        if settings.contact_enabled:
            contact = self.contact_point(positions, velocities, anchor_x)
            if contact.in_contact:
                normal, tangential = contact_force(contact, settings)
                rhs += self.tip_force(angles, tangential, normal)

        try:
            acc = np.linalg.solve(mass, rhs)
        except np.linalg.LinAlgError as e:
            raise MassMatrixError(f"Mass matrix is singular: {e}", state_dump={
                'positions': positions.tolist(),
                'velocities': velocities.tolist(),
                'mass_matrix': mass.tolist(),
            })

        if not self.has_motor:
            return acc
        motor_acc = (torques.motor + motor_torque) / self.params.motor_rotor_inertia
        return np.append(acc, motor_acc)

    def flows(self, positions: np.ndarray, velocities: np.ndarray, torques: AppliedTorques,
              settings: SimSettings, anchor_x: Optional[float] = None) -> EnergyFlows:
        """Actuator, damping and contact power for flat state vectors."""
        p = self.params
        n = self.n_coords
        angles, rates = positions[3:n], velocities[3:n]

        actuator = torques.hip * velocities[2]
        damping = -p.joint_damping * float(np.dot(rates, rates))
        for k, upper in enumerate(self.upper_limits):
            damping += endstop_dissipation(angles[k], rates[k], self.lower_limit, upper,
                                           p.endstop_stiffness, p.endstop_damping)

        if self.has_motor:
            motor_angle, motor_rate = positions[n], velocities[n]
            actuator += torques.motor * motor_rate
            damping -= p.motor_damping * motor_rate ** 2
            damping += endstop_dissipation(motor_angle, motor_rate, 0.0, p.motor_stroke,
                                           p.endstop_stiffness, p.endstop_damping)

        contact_power = 0.0
        if settings.contact_enabled:
            contact = self.contact_point(positions, velocities, anchor_x)
            if contact.in_contact:
                normal, tangential = contact_force(contact, settings)
                # ground spring energy is part of total_energy
                contact_power = tangential * contact.velocity[0] + normal * contact.velocity[1] \
                    - settings.contact_stiffness * contact.penetration * contact.velocity[1]

        return EnergyFlows(actuator=float(actuator), damping=float(damping), contact=float(contact_power))

    def lag_blend(self, dt: float) -> float:
        """Per-step blend factor of the first-order motor lag."""
        if self.params.motor_lag <= 0:
            return 1.0
        return 1.0 - math.exp(-dt / self.params.motor_lag)


@lru_cache(maxsize=32)
def get_leg_model(params: RobotParams) -> LegModel:
    """Shared LegModel per parameter set."""
    logger.debug(f"Building leg model for configuration {params.leg_config.value}")
    return LegModel(params)


# ==================== Contact ====================

def contact_force(c: ContactPoint, settings: SimSettings) -> Tuple[float, float]:
    """
    Ground reaction at a contact point.

    Args:
        c: Contact point
        settings: Contact and friction parameters

    Returns:
        Tuple of (F_n, F_t) [N]; F_n never pulls the tip down
    """
    if c.penetration <= 0.0:
        return 0.0, 0.0

    normal = max(0.0, settings.contact_stiffness * c.penetration
                 + settings.contact_damping * c.penetration_rate)
    if normal == 0.0:
        return 0.0, 0.0

    slide = float(c.velocity[0])
    limit = settings.friction_coefficient * normal

    if FrictionModel(settings.friction_model) == FrictionModel.ANCHORED and c.anchor_x is not None:
        trial = -settings.tangential_stiffness * (float(c.position[0]) - c.anchor_x) \
            - settings.tangential_damping * slide
        return normal, float(np.clip(trial, -limit, limit))

    if settings.friction_velocity > 0:
        return normal, -limit * math.tanh(slide / settings.friction_velocity)
    return normal, -limit * float(np.sign(slide))


def update_anchor(c: ContactPoint, settings: SimSettings) -> Optional[float]:
    """
    Stick anchor for the anchored friction model after a step.

    The anchor is set at touchdown, follows the tip while it slides and is
    cleared at liftoff.
    """
    if FrictionModel(settings.friction_model) != FrictionModel.ANCHORED or not c.in_contact:
        return None
    tip_x = float(c.position[0])
    if c.anchor_x is None or settings.tangential_stiffness <= 0:
        return tip_x

    normal, tangential = contact_force(c, settings)
    if abs(tangential) >= settings.friction_coefficient * normal:
        return tip_x + tangential / settings.tangential_stiffness
    return c.anchor_x


# ==================== State Helpers ====================

def _limit(value: float, bound: float) -> float:
    return max(-bound, min(bound, value))


def resting_state(params: RobotParams, settings: SimSettings) -> SimState:
    """
    Initial condition of every trial.

    Leg at its resting pose with the femur at the neutral hip angle, SELDA
    motor at zero and the tip initial_clearance above the ground, all at rest.
    """
    joints = resting_joint_state(params, neutral_hip_angle(params))
    tip = forward_kinematics(joints, params).tip
    selda = None
    if params.has_foot:
        selda = selda_state(0.0, 0.0, 0.0, joints.joint_angles[3], params)
    return SimState(
        t=0.0,
        x=0.0,
        y=settings.initial_clearance - float(tip[1]),
        vx=0.0,
        vy=0.0,
        joints=joints,
        selda=selda,
    )


def _pack(model: LegModel, template: SimState, t: float, positions: np.ndarray, velocities: np.ndarray,
          motor_torque: float, hip_torque: float, anchor_x: Optional[float],
          settings: SimSettings) -> SimState:
    n = model.n_coords
    joints = JointState(positions[2:n].copy(), velocities[2:n].copy())
    selda = None
    if model.has_motor:
        selda = selda_state(float(positions[n]), float(velocities[n]), motor_torque,
                            float(positions[n - 1]), model.params)

    grf = (0.0, 0.0)
    contact = model.contact_point(positions, velocities, anchor_x)
    if settings.contact_enabled and contact.in_contact:
        normal, tangential = contact_force(contact, settings)
        grf = (tangential, normal)

    return template.evolve(
        t=t,
        x=float(positions[0]),
        y=float(positions[1]),
        vx=float(velocities[0]),
        vy=float(velocities[1]),
        joints=joints,
        selda=selda,
        contact=settings.contact_enabled and contact.in_contact,
        grf=grf,
        anchor_x=anchor_x,
        hip_torque=hip_torque,
    )


# ==================== Public Operations ====================

def compute_accelerations(s: SimState, applied_torques: AppliedTorques, params: RobotParams,
                          settings: SimSettings) -> np.ndarray:
    """
    Generalized accelerations at a state.

    Args:
        s: Current state
        applied_torques: Hip and SELDA motor torques acting on the plant
        params: Robot parameters
        settings: Gravity and contact settings

    Returns:
        Accelerations of [x, y, hip, interior angles..., motor]
    """
    model = get_leg_model(params)
    torques = AppliedTorques(
        hip=_limit(applied_torques.hip, params.hip_torque_limit),
        motor=_limit(applied_torques.motor, params.motor_torque_limit) if model.has_motor else 0.0,
    )
    return model.accelerations(s.positions(), s.velocities(), torques, settings, s.anchor_x)


def _semi_implicit_euler(f: Callable, positions: np.ndarray, velocities: np.ndarray,
                         dt: float) -> Tuple[np.ndarray, np.ndarray]:
    velocities = velocities + dt * f(positions, velocities)
    return positions + dt * velocities, velocities


def _rk4(f: Callable, positions: np.ndarray, velocities: np.ndarray,
         dt: float) -> Tuple[np.ndarray, np.ndarray]:
    k1_x, k1_v = velocities, f(positions, velocities)
    k2_x = velocities + 0.5 * dt * k1_v
    k2_v = f(positions + 0.5 * dt * k1_x, k2_x)
    k3_x = velocities + 0.5 * dt * k2_v
    k3_v = f(positions + 0.5 * dt * k2_x, k3_x)
    k4_x = velocities + dt * k3_v
    k4_v = f(positions + dt * k3_x, k4_x)
    positions = positions + dt / 6.0 * (k1_x + 2.0 * k2_x + 2.0 * k3_x + k4_x)
    velocities = velocities + dt / 6.0 * (k1_v + 2.0 * k2_v + 2.0 * k3_v + k4_v)
    return positions, velocities


_INTEGRATORS = {
    Integrator.SEMI_IMPLICIT_EULER: _semi_implicit_euler,
    Integrator.RK4: _rk4,
}


def advance(s: SimState, command: ActuatorCommand, params: RobotParams, settings: SimSettings,
            n_steps: int = 1, ledger: Optional[EnergyLedger] = None) -> SimState:
    """
    Advance the state by n_steps physics steps under a held command.

    The hip torque is saturated and applied directly; the SELDA motor
    reference is saturated and filtered by the motor lag every physics step.
    When a ledger is given, actuator work is booked as torque times joint
    travel and damping and contact work by the trapezoidal rule.

    Raises:
        NonFiniteStateError: when the state stops being finite
    """
    model = get_leg_model(params)
    integrate = _INTEGRATORS[Integrator(settings.integrator)]
    dt = settings.physics_dt

    hip = _limit(command.hip_torque, params.hip_torque_limit)
    target = _limit(command.ankle_torque, params.motor_torque_limit) if model.has_motor else 0.0
    motor = s.selda.commanded_torque if s.selda is not None else 0.0
    blend = model.lag_blend(dt)

    positions, velocities = s.positions(), s.velocities()
    anchor_x = s.anchor_x
    track_anchor = settings.contact_enabled and \
        FrictionModel(settings.friction_model) == FrictionModel.ANCHORED
    flows = None
    if ledger is not None:
        flows = model.flows(positions, velocities, AppliedTorques(hip=hip, motor=motor), settings, anchor_x)

    for k in range(1, n_steps + 1):
        if model.has_motor:
            motor += blend * (target - motor)
        torques = AppliedTorques(hip=hip, motor=motor)

        def f(x: np.ndarray, v: np.ndarray) -> np.ndarray:
            return model.accelerations(x, v, torques, settings, anchor_x)

        previous = positions
        positions, velocities = integrate(f, positions, velocities, dt)

        if not (np.all(np.isfinite(positions)) and np.all(np.isfinite(velocities))):
            t = s.t + k * dt
            logger.debug(f"Non-finite state at t={t:.6f} s")
            raise NonFiniteStateError(f"State became non-finite at t={t:.6f} s", diagnostics={
                't': t,
                'positions': positions.tolist(),
                'velocities': velocities.tolist(),
                'hip_torque': hip,
                'motor_torque': motor,
                'integrator': Integrator(settings.integrator).value,
                'physics_dt': dt,
            })

        if track_anchor:
            anchor_x = update_anchor(model.contact_point(positions, velocities, anchor_x), settings)

        if ledger is not None:
            travel = positions - previous
            ledger.actuator_work += hip * travel[2]
            if model.has_motor:
                ledger.actuator_work += motor * travel[model.n_coords]
            new_flows = model.flows(positions, velocities, torques, settings, anchor_x)
            ledger.damping_work += 0.5 * dt * (flows.damping + new_flows.damping)
            ledger.contact_work += 0.5 * dt * (flows.contact + new_flows.contact)
            flows = new_flows

    return _pack(model, s, s.t + n_steps * dt, positions, velocities, motor, hip, anchor_x, settings)


def step(s: SimState, command: ActuatorCommand, params: RobotParams, settings: SimSettings) -> SimState:
    """
    Advance the state by one physics step.

    Args:
        s: Current state
        command: Controller output held over the step
        params: Robot parameters
        settings: Integrator, time step and contact settings

    Returns:
        State at t + physics_dt
    """
    return advance(s, command, params, settings, 1)


# ==================== Energy and Momentum ====================

def total_energy(s: SimState, params: RobotParams, settings: SimSettings) -> float:
    """
    Mechanical energy: kinetic, gravitational, elastic and ground spring [J].

    Gravitational energy is zero with the hip at y = 0 and every segment
    horizontal.
    """
    model = get_leg_model(params)
    positions, velocities = s.positions(), s.velocities()
    n = model.n_coords
    angles = positions[2:n]

    kinetic = 0.5 * velocities[:n] @ model.mass_matrix(angles) @ velocities[:n]
    motor_angle = 0.0
    if model.has_motor:
        motor_angle = float(positions[n])
        kinetic += 0.5 * params.motor_rotor_inertia * velocities[n] ** 2

    phi = absolute_angles(angles)
    gravity = settings.gravity * (model.total_mass * positions[1] - np.dot(model.first_moments, np.cos(phi)))
    elastic = elastic_energy(angles, motor_angle, params)

    ground = 0.0
    if settings.contact_enabled:
        contact = model.contact_point(positions, velocities)
        ground = 0.5 * settings.contact_stiffness * contact.penetration ** 2
    return float(kinetic + gravity + elastic + ground)


def energy_flows(s: SimState, applied_torques: AppliedTorques, params: RobotParams,
                 settings: SimSettings) -> EnergyFlows:
    """
    Power flowing into the mechanical system at a state.

    Along any trajectory, the rate of change of total_energy equals the sum of
    these flows.
    """
    model = get_leg_model(params)
    torques = AppliedTorques(
        hip=_limit(applied_torques.hip, params.hip_torque_limit),
        motor=_limit(applied_torques.motor, params.motor_torque_limit) if model.has_motor else 0.0,
    )
    return model.flows(s.positions(), s.velocities(), torques, settings, s.anchor_x)


def linear_momentum(s: SimState, params: RobotParams) -> np.ndarray:
    """Total linear momentum of trunk and leg [kg*m/s]."""
    model = get_leg_model(params)
    n = model.n_coords
    positions, velocities = s.positions(), s.velocities()
    return model.mass_matrix(positions[2:n])[:2] @ velocities[:n]
