"""Utils module for SELDA Sim."""

from .validators import (
    validate_robot_params,
    validate_sim_settings,
    validate_controller_config,
    validate_timing_values,
    validate_plot_columns,
    sanitize_input
)

__all__ = [
    # Validators
    'validate_robot_params',
    'validate_sim_settings',
    'validate_controller_config',
    'validate_timing_values',
    'validate_plot_columns',
    'sanitize_input',
]
