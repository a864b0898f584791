"""
SELDA Sim - Studies
The three experiments: transmission stiffness characterization, passive
comparison of the two leg configurations and the ankle timing sweep.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
import pandas as pd

from src.config import Config
from src.errors import ConfigValidationError, InsufficientStepsError
from src.experiments.gait_analysis import GaitMetrics, analyze_trial
from src.experiments.trial import TrajectoryLog, run_trial
from src.model.params import ControllerConfig, LegConfig, RobotParams, SeldaModel, SimSettings, default_params
from src.physics.elastics import StiffnessCharacterization, characterize_stiffness
from src.utils.validators import validate_timing_values

logger = logging.getLogger(__name__)

# Hardware results the simulated studies are compared against
COMPARISON_REFERENCE = {
    'mean_velocity_a': 0.62,        # m/s
    'mean_velocity_b': 1.20,        # m/s
    'step_length_a': 0.378,         # m
    'step_length_b': 0.730,         # m
    'revolution_time_b': 8.1,       # s
}

SWEEP_REFERENCE = {
    'best_velocity': 1.30,          # m/s
    'best_timing': 0.20,
    'worst_velocity': 1.14,         # m/s
    'worst_timing': 0.15,
    'passive_velocity': 1.20,       # m/s
    'min_steps_per_revolution': 13,
}

STIFFNESS_REFERENCE = 0.15          # N*m/rad

DEFAULT_TIMINGS = (0.05, 0.10, 0.15, 0.20, 0.25, 0.30)

PASSIVE_LABEL = 'passive'

SUMMARY_COLUMNS = [
    'config', 'label', 't_T', 'mean_velocity', 'step_count',
    'step_length_mean', 'step_length_median', 'step_length_q1', 'step_length_q3',
    'step_length_min', 'step_length_max',
    'step_height_mean', 'step_height_median', 'step_height_q1', 'step_height_q3',
    'step_height_min', 'step_height_max',
    'step_duration_mean', 'step_duration_median', 'step_duration_q1', 'step_duration_q3',
    'step_duration_min', 'step_duration_max',
    'revolution_time', 'revolution_extrapolated', 'period_two',
]


@dataclass(frozen=True)
class TrialResult:
    """One trial of a study with its metrics; metrics is None when the leg did not hop."""

    label: str
    params: RobotParams
    timing: float
    log: TrajectoryLog
    metrics: Optional[GaitMetrics]

    def summary_row(self) -> Dict[str, float]:
        row: Dict[str, float] = {'config': self.params.leg_config.value, 'label': self.label, 't_T': self.timing}
        if self.metrics is not None:
            row.update(self.metrics.as_row())
        return {column: row.get(column, float('nan')) for column in SUMMARY_COLUMNS}


@dataclass(frozen=True)
class ComparisonReport:
    """Passive configuration A against configuration B."""

    trial_a: TrialResult
    trial_b: TrialResult
    reference: Dict[str, float] = field(default_factory=lambda: dict(COMPARISON_REFERENCE))

    def summary(self) -> pd.DataFrame:
        return pd.DataFrame([self.trial_a.summary_row(), self.trial_b.summary_row()], columns=SUMMARY_COLUMNS)

    def steps(self) -> pd.DataFrame:
        return steps_table([self.trial_a, self.trial_b])

    def ratios(self) -> Dict[str, float]:
        """B over A for mean velocity, step length and step height."""
        a, b = self.trial_a.metrics, self.trial_b.metrics
        if a is None or b is None:
            return {'mean_velocity': float('nan'), 'step_length': float('nan'), 'step_height': float('nan')}
        return {
            'mean_velocity': _ratio(b.mean_velocity, a.mean_velocity),
            'step_length': _ratio(b.step_length.mean, a.step_length.mean),
            'step_height': _ratio(b.step_height.mean, a.step_height.mean),
        }


@dataclass(frozen=True)
class SweepResult:
    """Timing sweep table, ordered passive first then by timing."""

    trials: List[TrialResult]
    reference: Dict[str, float] = field(default_factory=lambda: dict(SWEEP_REFERENCE))

    def summary(self) -> pd.DataFrame:
        return pd.DataFrame([trial.summary_row() for trial in self.trials], columns=SUMMARY_COLUMNS)

    def ranking(self) -> List[str]:
        """Labels ordered by mean velocity, fastest first; trials without metrics last."""
        def key(trial: TrialResult) -> Tuple[int, float, str]:
            if trial.metrics is None or not math.isfinite(trial.metrics.mean_velocity):
                return 1, 0.0, trial.label
            return 0, -trial.metrics.mean_velocity, trial.label
        return [trial.label for trial in sorted(self.trials, key=key)]

    def steps(self) -> pd.DataFrame:
        return steps_table(self.trials)

    def velocity_modulation(self) -> float:
        """Spread of mean velocity across the active timings, relative to the slowest."""
        velocities = [t.metrics.mean_velocity for t in self.trials
                      if t.label != PASSIVE_LABEL and t.metrics is not None]
        if len(velocities) < 2 or min(velocities) <= 0:
            return float('nan')
        return max(velocities) / min(velocities) - 1.0


STEP_COLUMNS = ['label', 't_T', 'touchdown', 'step_length', 'step_height', 'step_duration']


def steps_table(trials: Sequence[TrialResult]) -> pd.DataFrame:
    """One row per analysed step of every trial, for distribution plots."""
    rows = []
    for trial in trials:
        if trial.metrics is None:
            continue
        for record in trial.metrics.steps:
            rows.append({
                'label': trial.label,
                't_T': trial.timing,
                'touchdown': record.touchdown,
                'step_length': record.length,
                'step_height': record.height,
                'step_duration': record.duration,
            })
    return pd.DataFrame(rows, columns=STEP_COLUMNS)


def _ratio(numerator: float, denominator: float) -> float:
    if denominator == 0 or not math.isfinite(denominator):
        return float('nan')
    return numerator / denominator


# ==================== Characterization ====================

def characterize(params: Optional[RobotParams] = None, sweep: Optional[Sequence[float]] = None,
                 model: Optional[SeldaModel] = None, points: int = 25) -> StiffnessCharacterization:
    """
    Full-stroke quasi-static sweep of the SELDA motor with the foot clamped.

    Args:
        params: Robot parameters; defaults to configuration B
        sweep: Motor angles [rad]; defaults to points angles over the motor stroke
        model: SELDA model override
        points: Sweep resolution when no sweep is given

    Returns:
        StiffnessCharacterization
    """
    params = params or default_params(LegConfig.B)
    if sweep is None:
        sweep = np.linspace(0.0, params.motor_stroke, points)
    result = characterize_stiffness(params, sweep, model)
    logger.info(f"Fitted SELDA stiffness {result.stiffness:.4f} N*m/rad "
                f"(configured {params.selda_stiffness:.4f})")
    return result


# ==================== Trials ====================

def _run_job(job: Tuple[str, RobotParams, SimSettings, ControllerConfig, float]) -> TrialResult:
    label, params, settings, controller, timing = job
    log = run_trial(params, settings, controller, label=label)
    try:
        metrics = analyze_trial(log, params)
    except InsufficientStepsError as e:
        logger.warning(f"Trial {label}: {e}")
        metrics = None
    return TrialResult(label=label, params=params, timing=timing, log=log, metrics=metrics)


def run_jobs(jobs: List[Tuple[str, RobotParams, SimSettings, ControllerConfig, float]],
             threads: Optional[int] = None) -> List[TrialResult]:
    """
    Run independent trials, in worker processes when more than one is allowed.

    Results come back in job order whatever the completion order.
    """
    workers = min(Config.max_workers(threads), len(jobs))
    if workers <= 1:
        return [_run_job(job) for job in jobs]

    logger.info(f"Running {len(jobs)} trials on {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(_run_job, jobs))


def compare_configurations(settings: SimSettings, controller: Optional[ControllerConfig] = None,
                           params_a: Optional[RobotParams] = None, params_b: Optional[RobotParams] = None,
                           threads: Optional[int] = None) -> ComparisonReport:
    """
    Run configurations A and B with the passive foot under identical control.

    Args:
        settings: Simulation settings shared by both trials
        controller: Controller configuration; the ankle is disabled for both
        params_a: Configuration A parameters; defaults to default_params(A)
        params_b: Configuration B parameters; defaults to default_params(B)
        threads: Worker limit

    Returns:
        ComparisonReport with paired metrics and B/A ratios
    """
    controller = replace(controller or ControllerConfig(), ankle_enabled=False)
    params_a = params_a or default_params(LegConfig.A)
    params_b = params_b or default_params(LegConfig.B)

    trial_a, trial_b = run_jobs([
        ('A', params_a, settings, controller, float('nan')),
        ('B', params_b, settings, controller, float('nan')),
    ], threads)
    report = ComparisonReport(trial_a=trial_a, trial_b=trial_b)
    logger.info(f"Comparison ratios B/A: {report.ratios()}")
    return report


def parse_timings(text: str) -> List[float]:
    """
    Parse 'start:stop:step' or a comma list into activation timings.

    The stop value is included when the range lands on it.
    """
    text = text.strip()
    if ':' in text:
        parts = text.split(':')
        if len(parts) != 3:
            raise ConfigValidationError('timings', f"expected start:stop:step, got '{text}'")
        try:
            start, stop, increment = (float(part) for part in parts)
        except ValueError:
            raise ConfigValidationError('timings', f"expected numbers, got '{text}'")
        if increment <= 0:
            raise ConfigValidationError('timings', "step must be positive")
        count = int(math.floor((stop - start) / increment + 1e-9)) + 1
        values = [round(start + k * increment, 12) for k in range(max(count, 0))]
    else:
        try:
            values = [float(part) for part in text.split(',') if part.strip()]
        except ValueError:
            raise ConfigValidationError('timings', f"expected numbers, got '{text}'")
    return values


def sweep_label(timing: float) -> str:
    """Trial label of one sweep timing, e.g. tT_0.05."""
    return f"tT_{timing:g}"


def timing_sweep(settings: SimSettings, timings: Sequence[float] = DEFAULT_TIMINGS,
                 params: Optional[RobotParams] = None, controller: Optional[ControllerConfig] = None,
                 threads: Optional[int] = None) -> SweepResult:
    """
    One active trial per ankle activation timing plus a passive baseline.

    Args:
        settings: Simulation settings shared by all trials
        timings: Activation start fractions, each in [0, activation_end)
        params: Configuration B parameters; defaults to default_params(B)
        controller: Base controller configuration
        threads: Worker limit

    Returns:
        SweepResult with one row per trial, passive first
    """
    controller = controller or ControllerConfig()
    params = params or default_params(LegConfig.B)

    is_valid, error = validate_timing_values(list(timings), controller.activation_end)
    if not is_valid:
        raise ConfigValidationError.from_validator(error)
    if not params.has_foot:
        raise ConfigValidationError('leg_config', "the timing sweep needs configuration B")

    labels = [sweep_label(timing) for timing in sorted(timings)]
    if len(set(labels)) < len(labels):
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        raise ConfigValidationError('timings', f"timings must be distinct, got {', '.join(duplicates)} twice")

    jobs = [(PASSIVE_LABEL, params, settings, replace(controller, ankle_enabled=False), float('nan'))]
    for label, timing in zip(labels, sorted(timings)):
        active = replace(controller, ankle_enabled=True, activation_start=float(timing))
        jobs.append((label, params, settings, active, float(timing)))

    result = SweepResult(trials=run_jobs(jobs, threads))
    logger.info(f"Sweep ranking: {', '.join(result.ranking())}")
    return result
