"""
Tests for step detection and gait metrics on synthetic logs.
"""

from dataclasses import replace
import math

import numpy as np
import pytest

from src.errors import InsufficientStepsError
from src.experiments.gait_analysis import (
    MetricSummary,
    analyze_trial,
    compute_metrics,
    detect_steps,
    flight_energy_residuals,
    is_period_two,
)

DT = 1e-3


def hopping(make_log, duration=6.0, velocity=1.2, height=0.02, x=None, extra=None):
    """Flight and stance phases of 0.3 s each, starting in flight."""
    index = np.arange(int(round(duration / DT)) + 1)
    t = index * DT
    contact = (index // 300) % 2 == 1
    y = 0.3 + height * np.sin(math.pi * (t - 0.3) / 0.6) ** 2
    return make_log(t, velocity * t if x is None else x, y, contact, extra=extra)


class TestDetectSteps:
    def test_touchdowns(self, make_log):
        steps = detect_steps(hopping(make_log, duration=2.0))
        assert [s.touchdown for s in steps] == pytest.approx([0.3, 0.9, 1.5])
        assert [s.liftoff for s in steps] == pytest.approx([0.6, 1.2, 1.8])
        assert steps[0].next_touchdown == pytest.approx(0.9)
        assert steps[-1].next_touchdown is None
        assert not steps[-1].is_complete
        assert math.isnan(steps[-1].duration)

    def test_apex_between_touchdowns(self, make_log):
        steps = detect_steps(hopping(make_log, duration=2.0))
        assert steps[0].touchdown < steps[0].apex < steps[0].next_touchdown

    def test_chatter_merged(self, make_log):
        index = np.arange(2001)
        contact = (index // 300) % 2 == 1
        contact[400:410] = False
        log = make_log(index * DT, np.zeros(index.size), np.zeros(index.size), contact)
        assert [s.touchdown for s in detect_steps(log)] == pytest.approx([0.3, 0.9, 1.5])

    def test_never_lands(self, make_log):
        t = np.arange(100) * DT
        assert detect_steps(make_log(t, t, t, np.zeros(t.size))) == []

    def test_ends_in_contact(self, make_log):
        index = np.arange(500)
        log = make_log(index * DT, np.zeros(500), np.zeros(500), index >= 300)
        steps = detect_steps(log)
        assert len(steps) == 1
        assert steps[0].liftoff is None

    def test_starting_in_contact_is_not_a_touchdown(self, make_log):
        index = np.arange(1000)
        contact = (index < 100) | ((index >= 400) & (index < 700))
        log = make_log(index * DT, np.zeros(1000), np.zeros(1000), contact)
        assert [s.touchdown for s in detect_steps(log)] == pytest.approx([0.4])

    def test_empty_log(self, make_log):
        assert detect_steps(make_log([], [], [], [])) == []


class TestComputeMetrics:
    def test_step_height(self, make_log):
        log = hopping(make_log, height=0.02)
        metrics = compute_metrics(log, detect_steps(log), discard=0)
        assert metrics.step_height.mean == pytest.approx(0.02, rel=1e-3)
        assert metrics.step_height.min == pytest.approx(0.02, rel=1e-3)

    def test_step_length_and_duration(self, make_log):
        log = hopping(make_log, velocity=1.2)
        metrics = compute_metrics(log, detect_steps(log), discard=0)
        assert metrics.step_count == 9
        assert metrics.step_length.median == pytest.approx(0.72)
        assert metrics.step_duration.mean == pytest.approx(0.6)

    def test_transient_discarded(self, make_log):
        log = hopping(make_log)
        metrics = compute_metrics(log, detect_steps(log))
        assert metrics.step_count == 6
        assert metrics.steps[0].touchdown == pytest.approx(2.1)

    def test_velocity_and_extrapolated_revolution(self, make_log):
        log = hopping(make_log, velocity=1.20)
        metrics = compute_metrics(log, detect_steps(log), discard=0)
        assert metrics.mean_velocity == pytest.approx(1.20)
        assert metrics.revolution_time == pytest.approx(8.12, abs=5e-3)
        assert metrics.revolution_extrapolated

    def test_measured_revolution(self, make_log):
        log = hopping(make_log, velocity=2.0)
        metrics = compute_metrics(log, detect_steps(log), discard=0)
        assert metrics.revolution_time == pytest.approx(2 * math.pi * 1.55 / 2.0, rel=1e-6)
        assert not metrics.revolution_extrapolated

    def test_boom_radius(self, make_log, params_a):
        log = hopping(make_log, velocity=1.0)
        metrics = analyze_trial(log, replace(params_a, boom_radius=1.0), discard=0)
        assert metrics.revolution_time == pytest.approx(2 * math.pi)

    def test_backwards_hopping(self, make_log):
        log = hopping(make_log, velocity=-0.5)
        metrics = compute_metrics(log, detect_steps(log), discard=0)
        assert metrics.step_length.mean == pytest.approx(-0.3)
        assert metrics.revolution_time == math.inf

    def test_lengths_telescope(self, make_log):
        rng = np.random.default_rng(5)
        x = np.cumsum(rng.normal(0.001, 0.002, 6001))
        log = hopping(make_log, x=x)
        metrics = compute_metrics(log, detect_steps(log), discard=0)
        start, end = metrics.window
        travelled = x[int(round(end / DT))] - x[int(round(start / DT))]
        assert sum(s.length for s in metrics.steps) == pytest.approx(travelled, abs=1e-9)
        assert metrics.mean_velocity * (end - start) == pytest.approx(travelled, abs=1e-9)

    def test_window(self, make_log):
        log = hopping(make_log)
        metrics = compute_metrics(log, detect_steps(log), window=(1.0, 4.0), discard=0)
        assert [s.touchdown for s in metrics.steps] == pytest.approx([1.5, 2.1, 2.7, 3.3])

    def test_resampling_preserves_metrics(self, make_log):
        log = hopping(make_log, velocity=0.8)
        original = compute_metrics(log, detect_steps(log), discard=0)
        coarse_log = log.resample(2 * DT)
        coarse = compute_metrics(coarse_log, detect_steps(coarse_log), discard=0)
        assert coarse.mean_velocity == pytest.approx(original.mean_velocity, rel=0.01)
        assert coarse.step_length.mean == pytest.approx(original.step_length.mean, rel=0.01)
        assert coarse.step_height.mean == pytest.approx(original.step_height.mean, rel=0.01)

    def test_insufficient_steps(self, make_log):
        log = hopping(make_log, duration=2.0)
        with pytest.raises(InsufficientStepsError) as info:
            compute_metrics(log, detect_steps(log))
        assert info.value.found == 0

    def test_as_row(self, make_log):
        log = hopping(make_log)
        row = compute_metrics(log, detect_steps(log), discard=0).as_row()
        assert row['step_count'] == 9
        assert row['revolution_extrapolated'] == 1
        assert 'step_height_q3' in row


class TestPeriodTwo:
    def test_alternating_heights(self):
        assert is_period_two([0.05, 0.07, 0.05, 0.07])

    def test_regular_heights(self):
        assert not is_period_two([0.06, 0.061, 0.06, 0.059])

    def test_too_short(self):
        assert not is_period_two([0.05])

    def test_detected_from_log(self, make_log):
        log = hopping(make_log, height=0.05)
        y = log.frame['y_com'].to_numpy()
        t = log.time
        # every second step 40 % higher
        y = np.where(((t - 0.3) // 0.6) % 2 == 1, 0.3 + 1.4 * (y - 0.3), y)
        log.frame['y_com'] = y
        assert compute_metrics(log, detect_steps(log), discard=0).period_two


class TestMetricSummary:
    def test_quartiles(self):
        summary = MetricSummary.of([1.0, 2.0, 3.0, 4.0, 5.0])
        assert (summary.q1, summary.median, summary.q3) == (2.0, 3.0, 4.0)
        assert (summary.min, summary.max, summary.mean) == (1.0, 5.0, 3.0)

    def test_empty(self):
        assert math.isnan(MetricSummary.of([]).mean)


class TestFlightEnergyResiduals:
    def test_balanced_flight(self, make_log):
        t = np.arange(1000) * DT
        work = 0.5 * t
        dissipated = 0.1 * t
        log = hopping(make_log, duration=0.999, extra={
            'energy': 2.0 + work - dissipated,
            'actuator_work': work,
            'dissipated_energy': dissipated,
        })
        residuals = flight_energy_residuals(log)
        assert len(residuals) == 2
        np.testing.assert_allclose(residuals['residual'], 0.0, atol=1e-12)
        assert residuals['start'].iloc[1] == pytest.approx(0.6)

    def test_unbooked_energy(self, make_log):
        t = np.arange(300) * DT
        log = hopping(make_log, duration=0.299, extra={
            'energy': np.full(t.size, 2.0),
            'actuator_work': t,
            'dissipated_energy': np.zeros(t.size),
        })
        residuals = flight_energy_residuals(log)
        assert residuals['residual'].iloc[0] == pytest.approx(-0.299)
        assert residuals['relative'].iloc[0] == pytest.approx(0.299 / 2.0)

    def test_short_phases_skipped(self, make_log):
        index = np.arange(10)
        log = make_log(index * DT, index, index, index % 4 == 0)
        assert flight_energy_residuals(log, min_samples=4).empty
