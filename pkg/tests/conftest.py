"""
Shared fixtures for the SELDA Sim test suite.
"""

from dataclasses import replace
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.experiments.trial import TrajectoryLog, log_columns
from src.model.params import ControllerConfig, Integrator, LegConfig, SimSettings, default_params

CONFIG_DIR = Path(__file__).resolve().parent.parent / 'configs'


@pytest.fixture
def params_a():
    """Configuration A with the documented defaults."""
    return default_params(LegConfig.A)


@pytest.fixture
def params_b():
    """Configuration B with the documented defaults."""
    return default_params(LegConfig.B)


@pytest.fixture
def settings():
    return SimSettings()


@pytest.fixture
def controller():
    return ControllerConfig()


@pytest.fixture
def flight_settings():
    """RK4 in free flight: no ground, gravity on."""
    return SimSettings(integrator=Integrator.RK4, contact_enabled=False)


@pytest.fixture
def undamped_a(params_a):
    """Configuration A without any dissipation."""
    return replace(params_a, joint_damping=0.0, endstop_damping=0.0)


@pytest.fixture
def config_dir():
    return CONFIG_DIR


def synthetic_log(t, x, y, contact, n_segments=3, extra=None):
    """Trajectory log with the given time, trunk and contact columns, zeros elsewhere."""
    t = np.asarray(t, dtype=float)
    data = {name: np.zeros(t.size) for name in log_columns(n_segments)}
    data['t'] = t
    data['x_com'] = np.asarray(x, dtype=float)
    data['y_com'] = np.asarray(y, dtype=float)
    data['contact'] = np.asarray(contact, dtype=int)
    for name, values in (extra or {}).items():
        data[name] = np.asarray(values, dtype=float)
    return TrajectoryLog(pd.DataFrame(data, columns=log_columns(n_segments)), {'leg_config': 'A'})


@pytest.fixture
def make_log():
    return synthetic_log
