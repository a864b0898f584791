"""
Tests for CSV log, summary and stiffness files.
"""

import numpy as np
import pandas as pd
import pytest

from src.errors import ResultsIOError
from src.experiments.trial import TrajectoryLog, log_columns
from src.output.csv_io import (
    read_frame_csv,
    read_log_csv,
    write_frame_csv,
    write_log_csv,
    write_stiffness_csv,
    write_summary_csv,
)
from src.physics.elastics import characterize_stiffness


@pytest.fixture
def random_log(make_log):
    rng = np.random.default_rng(42)
    n = 250
    t = np.arange(n) * 1e-3
    extra = {name: rng.normal(size=n) for name in ('q_hip', 'q_knee', 'energy', 'grf_y')}
    log = make_log(t, rng.normal(size=n), rng.uniform(0.2, 0.4, n), rng.integers(0, 2, n), extra=extra)
    log.metadata.update({'config_hash': 'abc123', 'seed': '0'})
    return log


class TestTrajectoryLogFiles:
    def test_round_trip_is_exact(self, tmp_path, random_log):
        path = write_log_csv(random_log, tmp_path / 'log.csv')
        back = read_log_csv(path)
        pd.testing.assert_frame_equal(back.frame, random_log.frame, check_exact=True)
        assert back.metadata == random_log.metadata

    def test_repeat_writes_identical(self, tmp_path, random_log):
        first = write_log_csv(random_log, tmp_path / 'a.csv').read_bytes()
        second = write_log_csv(random_log, tmp_path / 'b.csv').read_bytes()
        assert first == second

    def test_header_layout(self, tmp_path, random_log):
        lines = write_log_csv(random_log, tmp_path / 'log.csv').read_text(encoding='utf-8').splitlines()
        assert lines[0] == '# leg_config: A'
        assert lines[3] == ','.join(log_columns(3))
        assert len(lines) == 4 + len(random_log)

    def test_empty_log_writes_header_only(self, tmp_path):
        log = TrajectoryLog.empty(4, {'leg_config': 'B'})
        path = write_log_csv(log, tmp_path / 'empty.csv')
        lines = path.read_text(encoding='utf-8').splitlines()
        assert lines == ['# leg_config: B', ','.join(log_columns(4))]
        back = read_log_csv(path)
        assert back.is_empty
        assert back.columns == log_columns(4)

    def test_creates_parent_directories(self, tmp_path, random_log):
        path = write_log_csv(random_log, tmp_path / 'deep' / 'er' / 'log.csv')
        assert path.exists()


class TestFrameFiles:
    def test_summary_with_text_columns(self, tmp_path):
        summary = pd.DataFrame({'label': ['A', 'B'], 'mean_velocity': [0.41, 0.53]})
        path = write_summary_csv(summary, tmp_path / 'summary.csv', {'study': 'compare'})
        frame, metadata = read_frame_csv(path)
        pd.testing.assert_frame_equal(frame, summary)
        assert metadata == {'study': 'compare'}

    def test_missing_file(self, tmp_path):
        with pytest.raises(ResultsIOError) as info:
            read_frame_csv(tmp_path / 'nope.csv')
        assert 'nope.csv' in str(info.value)

    def test_comments_only(self, tmp_path):
        path = tmp_path / 'blank.csv'
        path.write_text('# study: none\n', encoding='utf-8')
        with pytest.raises(ResultsIOError):
            read_frame_csv(path)

    def test_unwritable_destination(self, tmp_path):
        blocker = tmp_path / 'file'
        blocker.write_text('x', encoding='utf-8')
        with pytest.raises(ResultsIOError):
            write_frame_csv(pd.DataFrame({'a': [1.0]}), blocker / 'out.csv')


class TestStiffnessFile:
    def test_header_carries_fit(self, tmp_path, params_b):
        result = characterize_stiffness(params_b, np.linspace(0.0, 2.0, 9))
        frame, metadata = read_frame_csv(write_stiffness_csv(result, tmp_path / 'stiffness.csv'))
        assert float(metadata['fitted_stiffness_nm_per_rad']) == result.stiffness
        assert float(metadata['fitted_stiffness_nm_per_rad']) == pytest.approx(0.15)
        assert float(metadata['fitted_offset_nm']) == pytest.approx(params_b.selda_bias_torque)
        assert list(frame.columns) == ['motor_angle', 'torque']
        assert len(frame) == 9

    def test_extra_metadata(self, tmp_path, params_b):
        result = characterize_stiffness(params_b, [0.0, 1.0])
        _, metadata = read_frame_csv(write_stiffness_csv(result, tmp_path / 's.csv', {'model': 'linear'}))
        assert metadata['model'] == 'linear'
