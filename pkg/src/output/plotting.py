"""
SELDA Sim - Plot Rendering
Renders time series, box plots and scatter plots of logs and summaries to SVG.
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Tuple, Union
import logging

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from src.errors import ConfigValidationError, ResultsIOError  # noqa: E402
from src.utils.validators import validate_plot_columns  # noqa: E402

logger = logging.getLogger(__name__)

# Fixed id salt and no timestamp keep the SVG bytes reproducible
SVG_RC = {'svg.hashsalt': 'selda-sim', 'svg.fonttype': 'path'}
SVG_METADATA = {'Date': None}


class PlotKind(str, Enum):
    TIMESERIES = "timeseries"
    BOXPLOT = "boxplot"
    SCATTER = "scatter"


@dataclass(frozen=True)
class PlotSpec:
    """
    What to draw and where.

    timeseries plots every selector against x_column; scatter plots the
    remaining selectors against the first one; boxplot draws one box per
    group of group_column, or one per selector without a group column.
    """

    kind: PlotKind
    selectors: Tuple[str, ...]
    x_label: str = ''
    y_label: str = ''
    output_path: Union[str, Path] = 'plot.svg'
    x_column: str = 't'
    group_column: Optional[str] = None
    title: Optional[str] = None

    def required_columns(self) -> Tuple[str, ...]:
        columns = tuple(self.selectors)
        if PlotKind(self.kind) == PlotKind.TIMESERIES:
            columns += (self.x_column,)
        if self.group_column is not None:
            columns += (self.group_column,)
        return columns


def _check(spec: PlotSpec, data: pd.DataFrame):
    if not spec.selectors:
        raise ConfigValidationError('selectors', "at least one column is required")
    if PlotKind(spec.kind) == PlotKind.SCATTER and len(spec.selectors) < 2:
        raise ConfigValidationError('selectors', "scatter needs an x column and at least one y column")
    is_valid, error = validate_plot_columns(spec.required_columns(), data.columns)
    if not is_valid:
        raise ConfigValidationError.from_validator(error)


def build_figure(spec: PlotSpec, data: pd.DataFrame):
    """
    Draw the plot on a new figure.

    Args:
        spec: Plot specification
        data: Log or summary table

    Returns:
        matplotlib Figure; the caller closes it
    """
    _check(spec, data)
    kind = PlotKind(spec.kind)
    fig, ax = plt.subplots(figsize=(8, 4.5))

    if kind == PlotKind.TIMESERIES:
        for name in spec.selectors:
            ax.plot(data[spec.x_column], data[name], label=name, linewidth=1.0)
    elif kind == PlotKind.SCATTER:
        x_name = spec.selectors[0]
        for name in spec.selectors[1:]:
            ax.scatter(data[x_name], data[name], label=name, s=12)
    else:
        if spec.group_column is not None:
            value = spec.selectors[0]
            groups = list(dict.fromkeys(data[spec.group_column].tolist()))
            series = [data.loc[data[spec.group_column] == g, value].dropna().to_numpy() for g in groups]
            labels = [str(g) for g in groups]
        else:
            series = [data[name].dropna().to_numpy() for name in spec.selectors]
            labels = list(spec.selectors)
        ax.boxplot(series, patch_artist=True)
        ax.set_xticks(range(1, len(labels) + 1))
        ax.set_xticklabels(labels)

    ax.set_xlabel(spec.x_label or (spec.x_column if kind == PlotKind.TIMESERIES else ''))
    ax.set_ylabel(spec.y_label)
    if spec.title:
        ax.set_title(spec.title)
    if kind != PlotKind.BOXPLOT and len(spec.selectors) > (2 if kind == PlotKind.SCATTER else 1):
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def render_svg(spec: PlotSpec, data: pd.DataFrame) -> Path:
    """
    Render a plot to spec.output_path as SVG.

    Identical spec and data give identical bytes.

    Returns:
        Path written
    """
    path = Path(spec.output_path)
    with plt.rc_context(SVG_RC):
        fig = build_figure(spec, data)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(path, format='svg', metadata=SVG_METADATA)
        except OSError as e:
            logger.error(f"Failed to write plot {path}: {e}")
            raise ResultsIOError(str(path), f"Failed to write SVG ({e.strerror or e})")
        finally:
            plt.close(fig)
    logger.info(f"Rendered {PlotKind(spec.kind).value} plot to {path}")
    return path
