"""
SELDA Sim - Gait Analysis
Touchdown/liftoff detection and per-step gait metrics from trajectory logs.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple
import math

import numpy as np
import pandas as pd

from src.errors import InsufficientStepsError
from src.experiments.trial import TrajectoryLog
from src.model.params import RobotParams

# Contact gaps and steps shorter than this are merged [s]
DEBOUNCE = 0.05

# Steps discarded as start-up transient
TRANSIENT_STEPS = 3

# Relative difference between even and odd step heights that flags period-2 hopping
PERIOD_TWO_THRESHOLD = 0.10

DEFAULT_BOOM_RADIUS = 1.55


@dataclass(frozen=True)
class StepWindow:
    """Events of one step, from its touchdown to the next."""

    touchdown: float
    liftoff: Optional[float]        # None if the log ends in contact
    apex: Optional[float]           # highest trunk point before the next touchdown
    next_touchdown: Optional[float] = None

    @property
    def is_complete(self) -> bool:
        return self.next_touchdown is not None

    @property
    def duration(self) -> float:
        if self.next_touchdown is None:
            return float('nan')
        return self.next_touchdown - self.touchdown


@dataclass(frozen=True)
class StepRecord:
    touchdown: float
    length: float                   # m, may be negative
    height: float                   # m
    duration: float                 # s


@dataclass(frozen=True)
class MetricSummary:
    """Distribution of one per-step metric."""

    mean: float
    median: float
    q1: float
    q3: float
    min: float
    max: float

    @classmethod
    def of(cls, values: List[float]) -> 'MetricSummary':
        data = np.asarray(values, dtype=float)
        if data.size == 0:
            nan = float('nan')
            return cls(nan, nan, nan, nan, nan, nan)
        q1, median, q3 = np.percentile(data, [25, 50, 75])
        return cls(
            mean=float(np.mean(data)),
            median=float(median),
            q1=float(q1),
            q3=float(q3),
            min=float(np.min(data)),
            max=float(np.max(data)),
        )


@dataclass(frozen=True)
class GaitMetrics:
    """Steady-state gait statistics of one trial."""

    steps: List[StepRecord]
    mean_velocity: float            # m/s
    revolution_time: float          # s, for one lap of the boom circle
    revolution_extrapolated: bool   # True when the window is shorter than one lap
    step_length: MetricSummary
    step_height: MetricSummary
    step_duration: MetricSummary
    period_two: bool
    window: Tuple[float, float]
    extras: Dict[str, float] = field(default_factory=dict)

    @property
    def step_count(self) -> int:
        return len(self.steps)

    def as_row(self) -> Dict[str, float]:
        """Flat summary used for the summary CSV."""
        row: Dict[str, float] = {
            'mean_velocity': self.mean_velocity,
            'step_count': self.step_count,
            'revolution_time': self.revolution_time,
            'revolution_extrapolated': int(self.revolution_extrapolated),
            'period_two': int(self.period_two),
        }
        for name, summary in (('step_length', self.step_length), ('step_height', self.step_height),
                              ('step_duration', self.step_duration)):
            for stat in ('mean', 'median', 'q1', 'q3', 'min', 'max'):
                row[f'{name}_{stat}'] = getattr(summary, stat)
        return row


# ==================== Step Detection ====================

def _contact_intervals(t: np.ndarray, contact: np.ndarray) -> List[Tuple[int, Optional[int]]]:
    """Index pairs (rising edge, falling edge) of contact runs that start inside the log."""
    edges = np.diff(contact.astype(int))
    rising = list(np.flatnonzero(edges == 1) + 1)
    falling = list(np.flatnonzero(edges == -1) + 1)

    intervals: List[Tuple[int, Optional[int]]] = []
    for start in rising:
        ends = [end for end in falling if end > start]
        intervals.append((start, ends[0] if ends else None))
    return intervals


def detect_steps(log: TrajectoryLog, debounce: float = DEBOUNCE) -> List[StepWindow]:
    """
    Find touchdown, liftoff and apex events.

    Touchdowns are rising edges of the contact flag and liftoffs falling edges.
    Contact runs separated by less than the debounce time are merged, as are
    touchdowns closer together than it.

    Args:
        log: Trajectory log
        debounce: Merge threshold [s]

    Returns:
        One StepWindow per touchdown; empty when the leg never lands
    """
    if log.is_empty:
        return []

    t = log.time
    contact = log.column('contact').astype(bool)
    y = log.column('y_com').astype(float)

    merged: List[List[Optional[int]]] = []
    for start, end in _contact_intervals(t, contact):
        if merged:
            last_end = merged[-1][1]
            gap_start = last_end if last_end is not None else merged[-1][0]
            if t[start] - t[gap_start] < debounce or t[start] - t[merged[-1][0]] < debounce:
                merged[-1][1] = end
                continue
        merged.append([start, end])

    steps: List[StepWindow] = []
    for k, (start, end) in enumerate(merged):
        next_start = merged[k + 1][0] if k + 1 < len(merged) else None
        stop = next_start if next_start is not None else t.size - 1
        apex_index = start + int(np.argmax(y[start:stop + 1]))
        steps.append(StepWindow(
            touchdown=float(t[start]),
            liftoff=float(t[end]) if end is not None else None,
            apex=float(t[apex_index]),
            next_touchdown=float(t[next_start]) if next_start is not None else None,
        ))
    return steps


# ==================== Metrics ====================

def _revolution_time(t: np.ndarray, x: np.ndarray, lap: float, mean_velocity: float) -> Tuple[float, bool]:
    target = x[0] + lap
    reached = np.flatnonzero(x >= target)
    if reached.size:
        i = int(reached[0])
        if i == 0:
            return 0.0, False
        # linear interpolation between the bracketing samples
        fraction = (target - x[i - 1]) / (x[i] - x[i - 1])
        return float(t[i - 1] + fraction * (t[i] - t[i - 1]) - t[0]), False
    if mean_velocity <= 0:
        return float('inf'), True
    return lap / mean_velocity, True


def compute_metrics(log: TrajectoryLog, steps: List[StepWindow],
                    window: Optional[Tuple[float, float]] = None,
                    discard: int = TRANSIENT_STEPS,
                    boom_radius: float = DEFAULT_BOOM_RADIUS) -> GaitMetrics:
    """
    Per-step and aggregate gait metrics.

    Args:
        log: Trajectory log
        steps: Output of detect_steps
        window: Optional (start, end) time range; steps must lie inside it
        discard: Number of leading steps treated as transient
        boom_radius: Boom length used for the revolution time [m]

    Returns:
        GaitMetrics over the complete steps left after the transient

    Raises:
        InsufficientStepsError: when no complete step remains
    """
    complete = [s for s in steps if s.is_complete][discard:]
    if window is not None:
        start, end = window
        complete = [s for s in complete if s.touchdown >= start and s.next_touchdown <= end]
    if not complete:
        raise InsufficientStepsError(found=0)

    t = log.time
    x = log.column('x_com').astype(float)
    y = log.column('y_com').astype(float)

    def index_of(time: float) -> int:
        return int(np.argmin(np.abs(t - time)))

    records: List[StepRecord] = []
    for s in complete:
        i0, i1 = index_of(s.touchdown), index_of(s.next_touchdown)
        segment = y[i0:i1 + 1]
        records.append(StepRecord(
            touchdown=s.touchdown,
            length=float(x[i1] - x[i0]),
            height=float(np.max(segment) - np.min(segment)),
            duration=float(t[i1] - t[i0]),
        ))

    first, last = index_of(complete[0].touchdown), index_of(complete[-1].next_touchdown)
    elapsed = t[last] - t[first]
    mean_velocity = float((x[last] - x[first]) / elapsed) if elapsed > 0 else float('nan')
    revolution, extrapolated = _revolution_time(t[first:last + 1], x[first:last + 1],
                                                2.0 * math.pi * boom_radius, mean_velocity)

    heights = [r.height for r in records]
    return GaitMetrics(
        steps=records,
        mean_velocity=mean_velocity,
        revolution_time=revolution,
        revolution_extrapolated=extrapolated,
        step_length=MetricSummary.of([r.length for r in records]),
        step_height=MetricSummary.of(heights),
        step_duration=MetricSummary.of([r.duration for r in records]),
        period_two=is_period_two(heights),
        window=(float(t[first]), float(t[last])),
    )


def is_period_two(heights: List[float], threshold: float = PERIOD_TWO_THRESHOLD) -> bool:
    """True when alternating step heights differ by more than threshold times their mean."""
    if len(heights) < 2:
        return False
    data = np.asarray(heights, dtype=float)
    mean = float(np.mean(data))
    if mean <= 0:
        return False
    return abs(float(np.mean(data[0::2])) - float(np.mean(data[1::2]))) > threshold * mean


def analyze_trial(log: TrajectoryLog, params: Optional[RobotParams] = None,
                  discard: int = TRANSIENT_STEPS) -> GaitMetrics:
    """detect_steps followed by compute_metrics with the trial's boom radius."""
    radius = params.boom_radius if params is not None else DEFAULT_BOOM_RADIUS
    return compute_metrics(log, detect_steps(log), discard=discard, boom_radius=radius)


# ==================== Energy Checks ====================

def flight_energy_residuals(log: TrajectoryLog, min_samples: int = 3) -> pd.DataFrame:
    """
    Energy balance of every flight phase.

    Over a flight phase the change in total energy must equal the actuator
    work minus the dissipated energy. The relative residual is taken against
    the largest absolute energy reached in the phase.

    Args:
        log: Trajectory log with the energy ledger columns
        min_samples: Shortest flight phase to check

    Returns:
        DataFrame with columns start, end, residual [J], relative
    """
    rows = []
    if not log.is_empty:
        t = log.time
        airborne = log.column('contact').astype(int) == 0
        energy = log.column('energy').astype(float)
        work = log.column('actuator_work').astype(float)
        dissipated = log.column('dissipated_energy').astype(float)

        edges = np.diff(np.concatenate(([0], airborne.astype(int), [0])))
        starts, ends = np.flatnonzero(edges == 1), np.flatnonzero(edges == -1) - 1
        for i0, i1 in zip(starts, ends):
            if i1 - i0 + 1 < min_samples:
                continue
            residual = (energy[i1] - energy[i0]) - (work[i1] - work[i0]) + (dissipated[i1] - dissipated[i0])
            scale = float(np.max(np.abs(energy[i0:i1 + 1])))
            rows.append({
                'start': float(t[i0]),
                'end': float(t[i1]),
                'residual': float(residual),
                'relative': abs(residual) / scale if scale > 0 else 0.0,
            })
    return pd.DataFrame(rows, columns=['start', 'end', 'residual', 'relative'])
