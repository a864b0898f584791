"""
Tests for SVG plot rendering.
"""

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import pytest

from src.errors import ConfigValidationError, ResultsIOError
from src.output.plotting import PlotKind, PlotSpec, build_figure, render_svg


@pytest.fixture
def step_table():
    rng = np.random.default_rng(1)
    labels = [f't_T={t:.2f}' for t in (0.05, 0.10, 0.15, 0.20, 0.25, 0.30)]
    return pd.DataFrame({
        'label': np.repeat(labels, 8),
        'step_length': rng.normal(0.25, 0.03, 48),
        'step_height': rng.normal(0.02, 0.004, 48),
    })


@pytest.fixture
def series():
    t = np.linspace(0.0, 1.0, 101)
    return pd.DataFrame({'t': t, 'y_com': 0.3 + 0.01 * np.sin(10 * t), 'x_com': 0.4 * t})


@pytest.fixture(autouse=True)
def close_figures():
    yield
    plt.close('all')


class TestBuildFigure:
    def test_one_box_per_group(self, step_table):
        spec = PlotSpec(PlotKind.BOXPLOT, ('step_length',), group_column='label')
        ax = build_figure(spec, step_table).axes[0]
        assert len(ax.patches) == 6
        assert [tick.get_text() for tick in ax.get_xticklabels()][0] == 't_T=0.05'

    def test_one_box_per_column(self, step_table):
        spec = PlotSpec(PlotKind.BOXPLOT, ('step_length', 'step_height'))
        assert len(build_figure(spec, step_table).axes[0].patches) == 2

    def test_axis_labels(self, series):
        spec = PlotSpec(PlotKind.TIMESERIES, ('y_com',), y_label='trunk height [m]', title='Hop')
        ax = build_figure(spec, series).axes[0]
        assert ax.get_xlabel() == 't'
        assert ax.get_ylabel() == 'trunk height [m]'
        assert ax.get_title() == 'Hop'

    def test_timeseries_lines(self, series):
        spec = PlotSpec(PlotKind.TIMESERIES, ('y_com', 'x_com'), x_label='time [s]')
        ax = build_figure(spec, series).axes[0]
        assert len(ax.lines) == 2
        assert ax.get_xlabel() == 'time [s]'

    def test_scatter(self, series):
        spec = PlotSpec(PlotKind.SCATTER, ('x_com', 'y_com'))
        assert len(build_figure(spec, series).axes[0].collections) == 1

    def test_unknown_column(self, series):
        with pytest.raises(ConfigValidationError) as info:
            build_figure(PlotSpec(PlotKind.TIMESERIES, ('speed',)), series)
        assert 'speed' in str(info.value)

    def test_missing_group_column(self, step_table):
        with pytest.raises(ConfigValidationError):
            build_figure(PlotSpec(PlotKind.BOXPLOT, ('step_length',), group_column='config'), step_table)

    def test_scatter_needs_two_columns(self, series):
        with pytest.raises(ConfigValidationError):
            build_figure(PlotSpec(PlotKind.SCATTER, ('x_com',)), series)

    def test_no_selectors(self, series):
        with pytest.raises(ConfigValidationError):
            build_figure(PlotSpec(PlotKind.TIMESERIES, ()), series)


class TestRenderSvg:
    def test_writes_svg(self, tmp_path, series):
        path = render_svg(PlotSpec(PlotKind.TIMESERIES, ('y_com',), output_path=tmp_path / 'y.svg'), series)
        text = path.read_text(encoding='utf-8')
        assert '<svg' in text
        assert plt.get_fignums() == []

    def test_deterministic_bytes(self, tmp_path, step_table):
        first = render_svg(PlotSpec(PlotKind.BOXPLOT, ('step_length',), group_column='label',
                                    output_path=tmp_path / 'a.svg'), step_table)
        second = render_svg(PlotSpec(PlotKind.BOXPLOT, ('step_length',), group_column='label',
                                     output_path=tmp_path / 'b.svg'), step_table)
        assert first.read_bytes() == second.read_bytes()

    def test_unwritable_destination(self, tmp_path, series):
        blocker = tmp_path / 'file'
        blocker.write_text('x', encoding='utf-8')
        spec = PlotSpec(PlotKind.TIMESERIES, ('y_com',), output_path=blocker / 'y.svg')
        with pytest.raises(ResultsIOError):
            render_svg(spec, series)
        assert plt.get_fignums() == []
