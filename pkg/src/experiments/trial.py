"""
SELDA Sim - Trial Runner
Runs one closed-loop trial from the standard initial condition and records
the trajectory at the controller rate.
"""

from typing import Dict, List, Optional, Sequence
import logging

import numpy as np
import pandas as pd

from src.control.gait_controller import GaitController
from src.errors import NonFiniteStateError
from src.model.config_loader import config_hash, validate_parameter_set
from src.model.params import ControllerConfig, RobotParams, SimSettings
from src.physics.dynamics import EnergyLedger, advance, resting_state, total_energy
from src.physics.state import SimState

logger = logging.getLogger(__name__)

JOINT_NAMES = ('hip', 'knee', 'ankle', 'foot')

UNITS = 'SI (m, s, rad, N, N*m, J)'


def log_columns(n_segments: int) -> List[str]:
    """Fixed column order of a trajectory log for a leg with n_segments segments."""
    joints = JOINT_NAMES[:n_segments]
    return (
        ['t', 'x_com', 'y_com', 'vx_com', 'vy_com']
        + [f'q_{name}' for name in joints]
        + [f'qd_{name}' for name in joints]
        + ['tau_hip', 'tau_motor', 'grf_x', 'grf_y', 'contact', 'selda_deflection', 'motor_angle',
           'phase', 'energy', 'actuator_work', 'dissipated_energy']
    )


class TrajectoryLog:
    """Uniformly sampled trial record backed by a pandas DataFrame."""

    def __init__(self, frame: pd.DataFrame, metadata: Optional[Dict[str, str]] = None):
        """
        Initialize trajectory log.

        Args:
            frame: One row per sample, columns as given by log_columns
            metadata: Key/value pairs written as comment lines (config_hash, seed, ...)
        """
        self.frame = frame.reset_index(drop=True)
        if 'contact' in self.frame:
            self.frame['contact'] = self.frame['contact'].astype(int)
        self.metadata = dict(metadata or {})

    @classmethod
    def from_array(cls, rows: np.ndarray, columns: Sequence[str],
                   metadata: Optional[Dict[str, str]] = None) -> 'TrajectoryLog':
        return cls(pd.DataFrame(rows, columns=list(columns)), metadata)

    @classmethod
    def empty(cls, n_segments: int, metadata: Optional[Dict[str, str]] = None) -> 'TrajectoryLog':
        return cls.from_array(np.empty((0, len(log_columns(n_segments)))), log_columns(n_segments), metadata)

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def columns(self) -> List[str]:
        return list(self.frame.columns)

    @property
    def is_empty(self) -> bool:
        return len(self.frame) == 0

    @property
    def time(self) -> np.ndarray:
        return self.frame['t'].to_numpy(dtype=float)

    def column(self, name: str) -> np.ndarray:
        return self.frame[name].to_numpy()

    @property
    def sample_period(self) -> float:
        t = self.time
        if t.size < 2:
            return float('nan')
        return float(t[1] - t[0])

    def is_consistent(self, rel_tol: float = 1e-6) -> bool:
        """Time strictly increasing with a constant step and every value finite."""
        if self.is_empty:
            return True
        values = self.frame.to_numpy(dtype=float)
        if not np.all(np.isfinite(values)):
            return False
        steps = np.diff(self.time)
        if steps.size == 0:
            return True
        return bool(np.all(steps > 0) and np.allclose(steps, steps[0], rtol=rel_tol, atol=0.0))

    def resample(self, period: float) -> 'TrajectoryLog':
        """
        Resample onto a new uniform grid.

        Continuous columns are linearly interpolated; the contact flag holds its
        previous sample.
        """
        t = self.time
        grid = t[0] + period * np.arange(int(np.floor((t[-1] - t[0]) / period + 1e-9)) + 1)
        data = {}
        for name in self.frame.columns:
            values = self.frame[name].to_numpy(dtype=float)
            if name == 'contact':
                index = np.clip(np.searchsorted(t, grid, side='right') - 1, 0, t.size - 1)
                data[name] = values[index]
            else:
                data[name] = np.interp(grid, t, values)
        return TrajectoryLog(pd.DataFrame(data, columns=self.frame.columns), self.metadata)


def _record(state: SimState, phase: float, energy: float, ledger: EnergyLedger) -> List[float]:
    selda = state.selda
    return (
        [state.t, state.x, state.y, state.vx, state.vy]
        + state.joints.joint_angles.tolist()
        + state.joints.joint_velocities.tolist()
        + [
            state.hip_torque,
            selda.commanded_torque if selda is not None else 0.0,
            state.grf[0],
            state.grf[1],
            1.0 if state.contact else 0.0,
            selda.deflection if selda is not None else 0.0,
            selda.motor_angle if selda is not None else 0.0,
            phase,
            energy,
            ledger.actuator_work,
            ledger.dissipated,
        ]
    )


def trial_metadata(params: RobotParams, settings: SimSettings, controller: ControllerConfig,
                   label: Optional[str] = None) -> Dict[str, str]:
    metadata = {
        'config_hash': config_hash(params, settings, controller),
        'seed': str(settings.seed),
        'leg_config': params.leg_config.value,
        'units': UNITS,
    }
    if label is not None:
        metadata['label'] = label
    return metadata


def run_trial(params: RobotParams, settings: SimSettings, controller: ControllerConfig,
              label: Optional[str] = None) -> TrajectoryLog:
    """
    Simulate one trial from the resting pose for settings.total_duration.

    The controller is sampled every control_dt and its output held for the
    following physics substeps. Each log row is taken at a control tick,
    before the command computed at that tick acts, so its tau_hip and
    tau_motor are the torques applied over the preceding physics step.

    Args:
        params: Robot parameters
        settings: Simulation settings
        controller: Controller configuration
        label: Optional name stored in the log metadata

    Returns:
        TrajectoryLog sampled at control_dt

    Raises:
        ConfigValidationError: if the parameter set is invalid
        NonFiniteStateError: when the simulation diverges; carries the partial log
    """
    validate_parameter_set(params, settings, controller)

    columns = log_columns(params.n_segments)
    metadata = trial_metadata(params, settings, controller, label)
    n_ticks = int(round(settings.total_duration / settings.control_dt))
    rows = np.empty((n_ticks + 1, len(columns)))

    state = resting_state(params, settings)
    gait = GaitController(controller, params)
    ledger = EnergyLedger()
    substeps = settings.substeps

    logger.info(f"Starting trial {label or ''} (config {params.leg_config.value}, "
                f"{settings.total_duration:g} s, {_integrator_name(settings)})")

    for tick in range(n_ticks + 1):
        state = state.evolve(t=tick * settings.control_dt)
        command = gait.update(state)
        rows[tick] = _record(state, gait.phase, total_energy(state, params, settings), ledger)
        if tick == n_ticks:
            break

        try:
            state = advance(state, command, params, settings, substeps, ledger)
        except NonFiniteStateError as e:
            e.partial_log = TrajectoryLog.from_array(rows[:tick + 1], columns, metadata)
            logger.error(f"Trial {label or ''} aborted at t={tick * settings.control_dt:.3f} s: {e}")
            raise

        if tick % 1000 == 0:
            logger.debug(f"t={state.t:.3f} s x={state.x:.4f} m y={state.y:.4f} m contact={state.contact}")

    log = TrajectoryLog.from_array(rows, columns, metadata)
    logger.info(f"Finished trial {label or ''}: travelled {log.frame['x_com'].iloc[-1]:.3f} m")
    return log


def _integrator_name(settings: SimSettings) -> str:
    return getattr(settings.integrator, 'value', str(settings.integrator))
