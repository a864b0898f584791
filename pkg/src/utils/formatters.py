"""
SELDA Sim - Report Formatters
Formats study results as plain-text reports for the terminal.
"""

from typing import Dict, Optional
import math

from src.experiments.gait_analysis import GaitMetrics
from src.experiments.studies import ComparisonReport, SweepResult, STIFFNESS_REFERENCE
from src.model.params import RobotParams
from src.physics.elastics import StiffnessCharacterization
from src.physics.kinematics import resting_joint_state, virtual_leg


def format_number(value: Optional[float], digits: int = 3, unit: str = '') -> str:
    """Format a float, showing n/a for missing values."""
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return 'n/a'
    text = f"{value:.{digits}f}"
    return f"{text} {unit}" if unit else text


def format_characterization(result: StiffnessCharacterization, configured: Optional[float] = None) -> str:
    """
    Format a stiffness characterization.

    Args:
        result: Fitted characterization
        configured: Configured transmission stiffness [N*m/rad]

    Returns:
        Formatted report string
    """
    message = "SELDA stiffness characterization\n\n"
    message += f"  Sweep points:      {len(result.angles)}\n"
    message += f"  Fitted stiffness:  {format_number(result.stiffness, 4, 'N*m/rad')}\n"
    message += f"  Fitted offset:     {format_number(result.offset, 4, 'N*m')}\n"
    message += f"  Correlation r:     {format_number(result.r_value, 6)}\n"

    if configured is not None and configured > 0:
        error = abs(result.stiffness - configured) / configured * 100.0
        message += f"  Configured:        {format_number(configured, 4, 'N*m/rad')} ({error:.2f}% off)\n"

    message += f"\n  Hardware reference: {STIFFNESS_REFERENCE:.2f} N*m/rad\n"
    return message


def format_leg_geometry(params: RobotParams) -> str:
    """Resting virtual leg length against the calibration target."""
    length, _ = virtual_leg(resting_joint_state(params), params)
    message = f"  Resting leg length: {format_number(length, 3, 'm')}"
    message += f" (target {format_number(params.leg_resting_length, 3, 'm')})\n"
    return message


def format_trial_metrics(label: str, metrics: Optional[GaitMetrics]) -> str:
    """
    Format the gait metrics of one trial.

    Args:
        label: Trial label
        metrics: Metrics, or None when the leg did not hop

    Returns:
        Formatted report string
    """
    if metrics is None:
        return f"Trial {label}: no complete steps in the analysis window\n"

    revolution = format_number(metrics.revolution_time, 2, 's')
    if metrics.revolution_extrapolated:
        revolution += ' (extrapolated)'

    message = f"Trial {label}\n\n"
    message += f"  Steps analysed:    {metrics.step_count}\n"
    message += f"  Window:            {metrics.window[0]:.2f} s to {metrics.window[1]:.2f} s\n"
    message += f"  Mean velocity:     {format_number(metrics.mean_velocity, 3, 'm/s')}\n"
    message += f"  Revolution time:   {revolution}\n"
    message += f"  Step length:       {format_number(metrics.step_length.mean, 3, 'm')} "
    message += f"(median {format_number(metrics.step_length.median, 3)})\n"
    message += f"  Step height:       {format_number(metrics.step_height.mean, 4, 'm')} "
    message += f"(median {format_number(metrics.step_height.median, 4)})\n"
    message += f"  Step duration:     {format_number(metrics.step_duration.mean, 3, 's')}\n"

    if metrics.period_two:
        message += "  Step heights alternate (period-two gait)\n"

    return message


def _format_reference(reference: Dict[str, float]) -> str:
    lines = [f"    {key}: {value:g}" for key, value in reference.items()]
    return "  Hardware reference:\n" + "\n".join(lines) + "\n"


def format_comparison(report: ComparisonReport) -> str:
    """
    Format the configuration A against B comparison.

    Args:
        report: Comparison report

    Returns:
        Formatted report string
    """
    message = "Passive comparison, configuration A against B\n\n"
    message += format_trial_metrics('A', report.trial_a.metrics) + "\n"
    message += format_trial_metrics('B', report.trial_b.metrics) + "\n"

    message += "  Ratios B/A:\n"
    for key, value in report.ratios().items():
        message += f"    {key}: {format_number(value, 3)}\n"

    message += "\n" + _format_reference(report.reference)
    return message


def format_sweep(result: SweepResult) -> str:
    """
    Format the ankle timing sweep as a table with the velocity ranking.

    Args:
        result: Sweep result

    Returns:
        Formatted report string
    """
    message = "Ankle timing sweep\n\n"
    message += f"  {'label':<10} {'t_T':>6} {'v [m/s]':>9} {'length [m]':>11} {'height [m]':>11} {'steps':>6}\n"

    for trial in result.trials:
        timing = format_number(trial.timing, 2)
        metrics = trial.metrics
        if metrics is None:
            message += f"  {trial.label:<10} {timing:>6} {'n/a':>9} {'n/a':>11} {'n/a':>11} {0:>6}\n"
            continue
        message += (f"  {trial.label:<10} {timing:>6} {format_number(metrics.mean_velocity, 3):>9} "
                    f"{format_number(metrics.step_length.mean, 3):>11} "
                    f"{format_number(metrics.step_height.mean, 4):>11} {metrics.step_count:>6}\n")

    message += f"\n  Ranking by velocity: {', '.join(result.ranking())}\n"
    modulation = result.velocity_modulation()
    message += f"  Velocity modulation: {format_number(modulation * 100.0, 1, '%')}\n"
    message += "\n" + _format_reference(result.reference)
    return message
