"""Control module for SELDA Sim."""

from .gait_controller import (
    GaitController,
    ankle_command,
    cycle_phase,
    hip_pd_torque,
    hip_reference,
    hip_reference_rate,
)

__all__ = [
    'GaitController',
    'ankle_command',
    'cycle_phase',
    'hip_pd_torque',
    'hip_reference',
    'hip_reference_rate',
]
