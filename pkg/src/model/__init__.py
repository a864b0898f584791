"""Model configuration module for SELDA Sim."""

from .params import (
    ControllerConfig,
    FrictionModel,
    Integrator,
    LegConfig,
    RobotParams,
    SeldaModel,
    SimSettings,
    TimingReference,
    default_params,
    degenerate_config_b,
)
from .config_loader import (
    apply_overrides,
    config_hash,
    load_config,
    load_parameter_set,
    serialize_config,
)

__all__ = [
    'ControllerConfig',
    'FrictionModel',
    'Integrator',
    'LegConfig',
    'RobotParams',
    'SeldaModel',
    'SimSettings',
    'TimingReference',
    'default_params',
    'degenerate_config_b',
    'apply_overrides',
    'config_hash',
    'load_config',
    'load_parameter_set',
    'serialize_config',
]
