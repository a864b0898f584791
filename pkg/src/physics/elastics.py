"""
SELDA Sim - Elastic Elements
Torque laws of the knee cam spring, the biarticular spring and the
pneumatic series-elastic foot transmission (SELDA).

Joint torques are positive when they open the interior angle. SELDA torques
are positive towards foot extension: flexing the foot away from its
end-stop and turning the motor forward both compress the line.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple
import math

import numpy as np
from scipy import stats

from src.model.params import ATMOSPHERIC_PRESSURE, RobotParams, SeldaModel
from src.physics.kinematics import biarticular_stretch

# Smallest line volume the isothermal model allows, as a fraction of the rest volume
MIN_VOLUME_FRACTION = 0.05


@dataclass(frozen=True)
class SeldaState:
    """Motor-side state of the transmission."""

    motor_angle: float              # rad, gearbox output
    motor_velocity: float           # rad/s
    commanded_torque: float         # N*m
    deflection: float               # rad
    tendon_engaged: bool


@dataclass(frozen=True)
class StiffnessCharacterization:
    """Quasi-static motor sweep with the foot clamped at its end-stop."""

    angles: np.ndarray              # rad
    torques: np.ndarray             # N*m, torque needed to hold the motor
    stiffness: float                # N*m/rad, fitted slope
    offset: float                   # N*m, fitted intercept
    r_value: float

    def points(self) -> List[Tuple[float, float]]:
        return list(zip(self.angles.tolist(), self.torques.tolist()))


# ==================== Knee and Biarticular Springs ====================

def knee_rotational_stiffness(params: RobotParams) -> float:
    """Knee spring acting through its cam, k_k * r_k^2 [N*m/rad]."""
    return params.knee_stiffness * params.knee_cam_radius ** 2


def knee_torque(alpha: float, alpha_rate: float, params: RobotParams,
                damping: Optional[float] = None) -> float:
    """
    Knee spring torque restoring the knee toward its resting angle.

    Args:
        alpha: Knee interior angle [rad]
        alpha_rate: Knee angular velocity [rad/s]
        params: Robot parameters
        damping: Parasitic damping [N*m*s/rad]; defaults to params.joint_damping

    Returns:
        Torque [N*m]
    """
    if damping is None:
        damping = params.joint_damping
    return knee_rotational_stiffness(params) * (params.knee_resting_angle - alpha) - damping * alpha_rate


def biarticular_torques(deflection: float, params: RobotParams) -> Tuple[float, float]:
    """
    Torques of the biarticular spring at knee and ankle.

    Args:
        deflection: Spring stretch delta_b [m]
        params: Robot parameters

    Returns:
        Tuple of (knee_torque, ankle_torque) [N*m]
    """
    force = params.biarticular_stiffness * deflection
    torque = params.biarticular_insertion_radius * force
    return torque, torque


# ==================== SELDA Transmission ====================

def selda_deflection(motor_angle: float, foot_angle: float, params: RobotParams) -> float:
    """Line compression expressed as motor rotation [rad]."""
    return motor_angle + params.selda_coupling_ratio * (params.foot_endstop_angle - foot_angle)


def isothermal_constants(params: RobotParams) -> Tuple[float, float, float]:
    """
    Air-spring constants of the isothermal line model.

    The displaced volume per radian is fixed by the bias torque at the gauge
    pre-charge, the rest volume by requiring the small-deflection stiffness to
    equal selda_stiffness.

    Returns:
        Tuple of (volume_per_rad [m^3/rad], rest_volume [m^3], absolute_precharge [Pa])
    """
    gauge = params.selda_precharge_pressure
    absolute = ATMOSPHERIC_PRESSURE + gauge
    volume_per_rad = params.selda_bias_torque / gauge
    rest_volume = volume_per_rad ** 2 * absolute / params.selda_stiffness
    return volume_per_rad, rest_volume, absolute


def isothermal_selda_torque(deflection: float, params: RobotParams) -> float:
    """
    Line torque of an ideal isothermal air spring, p * V = const.

    Args:
        deflection: Line compression [rad]
        params: Robot parameters

    Returns:
        Torque produced by the gauge pressure [N*m]; equals the bias at zero
    """
    volume_per_rad, rest_volume, absolute = isothermal_constants(params)
    volume = max(rest_volume - volume_per_rad * deflection, MIN_VOLUME_FRACTION * rest_volume)
    pressure = absolute * rest_volume / volume
    return volume_per_rad * (pressure - ATMOSPHERIC_PRESSURE)


def selda_pull(deflection: float, params: RobotParams, model: Optional[SeldaModel] = None) -> float:
    """Tendon pull on top of the bias; never negative because the tendon cannot push."""
    model = SeldaModel(model or params.selda_model)
    if deflection <= 0.0:
        return 0.0
    if model == SeldaModel.ISOTHERMAL:
        return max(0.0, isothermal_selda_torque(deflection, params) - params.selda_bias_torque)
    return params.selda_stiffness * deflection


def selda_torque(state: SeldaState, foot_angle: float, params: RobotParams) -> Tuple[float, float]:
    """
    Torques of the pneumatic series-elastic transmission.

    Args:
        state: Motor-side state
        foot_angle: Foot joint interior angle [rad]
        params: Robot parameters

    Returns:
        Tuple of (foot_torque toward extension, motor reaction torque) [N*m]
    """
    line_torque = selda_line_torque(selda_deflection(state.motor_angle, foot_angle, params), params)
    return line_torque * params.selda_coupling_ratio, -line_torque


def selda_line_torque(deflection: float, params: RobotParams) -> float:
    """Bias plus tendon pull, as seen on the motor side."""
    return params.selda_bias_torque + selda_pull(deflection, params)


def selda_potential(deflection: float, params: RobotParams) -> float:
    """Energy stored in the line relative to the pre-charged rest state [J]."""
    bias_energy = params.selda_bias_torque * deflection
    if deflection <= 0.0:
        return bias_energy

    if SeldaModel(params.selda_model) == SeldaModel.LINEAR:
        return bias_energy + 0.5 * params.selda_stiffness * deflection ** 2

    volume_per_rad, rest_volume, absolute = isothermal_constants(params)
    limit = (1.0 - MIN_VOLUME_FRACTION) * rest_volume / volume_per_rad
    compressed = min(deflection, limit)
    energy = absolute * rest_volume * math.log(rest_volume / (rest_volume - volume_per_rad * compressed)) \
        - volume_per_rad * absolute * compressed
    if deflection > limit:
        pull_at_limit = isothermal_selda_torque(limit, params) - params.selda_bias_torque
        energy += pull_at_limit * (deflection - limit)
    return bias_energy + energy


def selda_state(motor_angle: float, motor_velocity: float, commanded_torque: float,
                foot_angle: float, params: RobotParams) -> SeldaState:
    """Assemble a SeldaState from raw motor and foot values."""
    deflection = selda_deflection(motor_angle, foot_angle, params)
    return SeldaState(
        motor_angle=motor_angle,
        motor_velocity=motor_velocity,
        commanded_torque=commanded_torque,
        deflection=deflection,
        tendon_engaged=selda_pull(deflection, params) > 0.0,
    )


# ==================== End-stops ====================

def endstop_torque(angle: float, rate: float, lower: float, upper: float,
                   stiffness: float, damping: float) -> float:
    """
    One-sided compliant end-stops; they push back but never pull.

    Returns:
        Torque [N*m], positive toward larger angles
    """
    if angle > upper:
        return -max(0.0, stiffness * (angle - upper) + damping * rate)
    if angle < lower:
        return max(0.0, stiffness * (lower - angle) - damping * rate)
    return 0.0


def endstop_potential(angle: float, lower: float, upper: float, stiffness: float) -> float:
    if angle > upper:
        return 0.5 * stiffness * (angle - upper) ** 2
    if angle < lower:
        return 0.5 * stiffness * (lower - angle) ** 2
    return 0.0


def endstop_dissipation(angle: float, rate: float, lower: float, upper: float,
                        stiffness: float, damping: float) -> float:
    """Power the end-stop removes beyond its stored energy [W], never positive."""
    torque = endstop_torque(angle, rate, lower, upper, stiffness, damping)
    if angle > upper:
        return torque * rate + stiffness * (angle - upper) * rate
    if angle < lower:
        return torque * rate - stiffness * (lower - angle) * rate
    return 0.0


def joint_limits(params: RobotParams) -> Tuple[float, Tuple[float, ...]]:
    """
    End-stop range of the interior joints.

    Returns:
        Tuple of (lower limit, upper limits knee..foot) [rad]
    """
    uppers = [math.pi] * (params.n_segments - 1)
    if params.has_foot:
        uppers[-1] = params.foot_endstop_angle
    return params.joint_min_angle, tuple(uppers)


def elastic_energy(joint_angles: Sequence[float], motor_angle: float, params: RobotParams) -> float:
    """
    Energy stored in every spring and end-stop of the leg [J].

    Args:
        joint_angles: Hip angle followed by the interior angles
        motor_angle: SELDA motor angle; ignored without a foot
        params: Robot parameters

    Returns:
        Sum of knee, biarticular, SELDA and end-stop potentials
    """
    knee, ankle = joint_angles[1], joint_angles[2]
    energy = 0.5 * knee_rotational_stiffness(params) * (params.knee_resting_angle - knee) ** 2
    stretch = biarticular_stretch(knee, ankle, params)
    energy += 0.5 * params.biarticular_stiffness * stretch ** 2

    lower, uppers = joint_limits(params)
    for angle, upper in zip(joint_angles[1:], uppers):
        energy += endstop_potential(angle, lower, upper, params.endstop_stiffness)

    if params.has_foot:
        energy += selda_potential(selda_deflection(motor_angle, joint_angles[3], params), params)
        energy += endstop_potential(motor_angle, 0.0, params.motor_stroke, params.endstop_stiffness)
    return energy


# ==================== Characterization ====================

def characterize_stiffness(params: RobotParams, sweep: Sequence[float],
                           model: Optional[SeldaModel] = None) -> StiffnessCharacterization:
    """
    Quasi-static stiffness measurement of the transmission.

    The foot is clamped at its extension end-stop and the motor is turned
    through the sweep; at each angle the torque needed to hold the motor is
    recorded and a straight line is fitted.

    Args:
        params: Robot parameters
        sweep: Motor angles [rad]
        model: SELDA model to evaluate; defaults to params.selda_model

    Returns:
        StiffnessCharacterization with the (angle, torque) points and the fit
    """
    angles = np.asarray(list(sweep), dtype=float)
    if angles.size < 2:
        raise ValueError(f"sweep needs at least 2 motor angles, got {angles.size}")
    if np.unique(angles).size < 2:
        raise ValueError("sweep needs at least 2 distinct motor angles")

    torques = np.array([
        params.selda_bias_torque + selda_pull(angle, params, model) for angle in angles
    ])
    fit = stats.linregress(angles, torques)
    return StiffnessCharacterization(
        angles=angles,
        torques=torques,
        stiffness=float(fit.slope),
        offset=float(fit.intercept),
        r_value=float(fit.rvalue),
    )
