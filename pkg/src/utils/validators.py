"""
SELDA Sim - Parameter Validators
Checks parameter sets against their invariants.
Every error message starts with the offending key.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, Iterable, Optional, Sequence, Tuple

if TYPE_CHECKING:
    from src.model.params import ControllerConfig, RobotParams, SimSettings

ValidationResult = Tuple[bool, Optional[str]]

_OK: ValidationResult = (True, None)


def _fail(key: str, message: str) -> ValidationResult:
    return False, f"{key}: {message}"


def _is_finite(value: float) -> bool:
    return isinstance(value, (int, float)) and math.isfinite(value)


def validate_robot_params(params: RobotParams) -> ValidationResult:
    """
    Validate robot design parameters.

    Args:
        params: Parameter set to validate

    Returns:
        Tuple of (is_valid, error_message)
    """
    strictly_positive = [
        'total_mass', 'knee_stiffness', 'knee_cam_radius', 'biarticular_stiffness',
        'biarticular_insertion_radius', 'selda_stiffness', 'selda_pulley_radius',
        'selda_coupling_ratio', 'motor_torque_limit', 'motor_rotor_inertia',
        'motor_stroke', 'hip_gear_ratio', 'boom_radius', 'leg_resting_length',
    ]
    for key in strictly_positive:
        value = getattr(params, key)
        if not _is_finite(value) or value <= 0:
            return _fail(key, f"must be a positive number, got {value}")

    non_negative = [
        'selda_bias_torque', 'motor_damping', 'motor_lag', 'joint_damping',
        'joint_armature', 'endstop_stiffness', 'endstop_damping',
    ]
    for key in non_negative:
        value = getattr(params, key)
        if not _is_finite(value) or value < 0:
            return _fail(key, f"must be zero or positive, got {value}")

    if not (0.0 < params.trunk_mass_fraction <= 1.0):
        return _fail('trunk_mass_fraction', f"must lie in (0, 1], got {params.trunk_mass_fraction}")

    lengths = params.segment_lengths
    expected = 3 if params.leg_config == 'A' else 4
    if len(lengths) not in (3, 4):
        return _fail('segment_lengths', f"must have 3 or 4 entries, got {len(lengths)}")
    if len(lengths) != expected:
        config_name = getattr(params.leg_config, 'value', params.leg_config)
        return _fail('segment_lengths',
                     f"leg configuration {config_name} needs {expected} entries, got {len(lengths)}")
    for length in lengths:
        if not _is_finite(length) or length <= 0:
            return _fail('segment_lengths', f"lengths must be positive, got {length}")

    angles = params.resting_joint_angles
    if len(angles) != len(lengths) - 1:
        return _fail('resting_joint_angles',
                     f"needs {len(lengths) - 1} entries for {len(lengths)} segments, got {len(angles)}")
    for angle in angles:
        if not _is_finite(angle) or not (0.0 < angle <= math.pi):
            return _fail('resting_joint_angles', f"angles must lie in (0, pi], got {angle}")

    if not (0.0 < params.joint_min_angle < min(angles)):
        return _fail('joint_min_angle', "must be positive and below every resting angle")

    if params.selda_model == 'isothermal':
        if not _is_finite(params.selda_precharge_pressure) or params.selda_precharge_pressure <= 0:
            return _fail('selda_precharge_pressure', "isothermal model needs a positive pre-charge")
        if params.selda_bias_torque <= 0:
            return _fail('selda_bias_torque', "isothermal model needs a positive bias torque")

    return _OK


def validate_sim_settings(settings: SimSettings) -> ValidationResult:
    """
    Validate integration and contact settings.

    Args:
        settings: Settings to validate

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not _is_finite(settings.physics_dt) or settings.physics_dt <= 0:
        return _fail('physics_dt', f"must be positive, got {settings.physics_dt}")

    if not _is_finite(settings.control_dt) or settings.control_dt <= 0:
        return _fail('control_dt', f"must be positive, got {settings.control_dt}")

    ratio = settings.control_dt / settings.physics_dt
    if round(ratio) < 1 or abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
        return _fail('control_dt', "must be a positive integer multiple of physics_dt")

    for key in ('contact_stiffness', 'contact_damping', 'friction_coefficient', 'friction_velocity',
                'tangential_stiffness', 'tangential_damping', 'gravity', 'initial_clearance'):
        value = getattr(settings, key)
        if not _is_finite(value) or value < 0:
            return _fail(key, f"must be zero or positive, got {value}")

    if not _is_finite(settings.total_duration) or settings.total_duration <= 0:
        return _fail('total_duration', f"must be positive, got {settings.total_duration}")

    return _OK


def validate_controller_config(cfg: ControllerConfig) -> ValidationResult:
    """
    Validate controller settings.

    Args:
        cfg: Controller configuration to validate

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not _is_finite(cfg.frequency) or cfg.frequency <= 0:
        return _fail('frequency', f"must be positive, got {cfg.frequency}")

    for key in ('kp', 'kd', 'hip_amplitude'):
        value = getattr(cfg, key)
        if not _is_finite(value) or value < 0:
            return _fail(key, f"must be zero or positive, got {value}")

    if not _is_finite(cfg.ankle_step_torque):
        return _fail('ankle_step_torque', "must be a finite number")

    if not (0.0 <= cfg.activation_start < cfg.activation_end <= 1.0):
        return _fail('activation_start',
                     f"need 0 <= start < end <= 1, got start={cfg.activation_start}, end={cfg.activation_end}")

    return _OK


def validate_timing_values(values: Sequence[float], activation_end: float = 0.5) -> ValidationResult:
    """
    Validate activation timings for a sweep.

    Args:
        values: Cycle fractions at which the ankle torque switches on
        activation_end: Cycle fraction at which it switches off

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not values:
        return _fail('timings', "at least one timing is required")

    for value in values:
        if not _is_finite(value) or not (0.0 <= value < activation_end):
            return _fail('timings', f"each timing must lie in [0, {activation_end}), got {value}")

    return _OK


def validate_plot_columns(selectors: Iterable[str], columns: Iterable[str]) -> ValidationResult:
    """
    Check that plot selectors reference existing columns.

    Args:
        selectors: Column names requested by a plot
        columns: Column names available in the data

    Returns:
        Tuple of (is_valid, error_message)
    """
    available = set(columns)
    for name in selectors:
        if name not in available:
            return _fail('selectors', f"unknown column '{name}'")
    return _OK


def sanitize_input(text: str) -> str:
    """
    Clean a raw configuration value.

    Args:
        text: Text to sanitize

    Returns:
        Sanitized text
    """
    # Remove null bytes
    text = text.replace('\x00', '')

    # Strip leading/trailing whitespace
    text = text.strip()

    return text
