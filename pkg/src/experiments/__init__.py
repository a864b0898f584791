"""Experiments module for SELDA Sim."""

from .trial import TrajectoryLog, log_columns, run_trial
from .gait_analysis import (
    GaitMetrics,
    MetricSummary,
    StepRecord,
    StepWindow,
    analyze_trial,
    compute_metrics,
    detect_steps,
    flight_energy_residuals,
)
from .studies import (
    ComparisonReport,
    SweepResult,
    TrialResult,
    characterize,
    compare_configurations,
    parse_timings,
    steps_table,
    sweep_label,
    timing_sweep,
)

__all__ = [
    'TrajectoryLog',
    'log_columns',
    'run_trial',
    'GaitMetrics',
    'MetricSummary',
    'StepRecord',
    'StepWindow',
    'analyze_trial',
    'compute_metrics',
    'detect_steps',
    'flight_energy_residuals',
    'ComparisonReport',
    'SweepResult',
    'TrialResult',
    'characterize',
    'compare_configurations',
    'parse_timings',
    'steps_table',
    'sweep_label',
    'timing_sweep',
]
