"""Output module for SELDA Sim."""

from .csv_io import (
    read_frame_csv,
    read_log_csv,
    stiffness_frame,
    write_frame_csv,
    write_log_csv,
    write_stiffness_csv,
    write_summary_csv,
)
from .plotting import PlotKind, PlotSpec, build_figure, render_svg

__all__ = [
    'read_frame_csv',
    'read_log_csv',
    'stiffness_frame',
    'write_frame_csv',
    'write_log_csv',
    'write_stiffness_csv',
    'write_summary_csv',
    'PlotKind',
    'PlotSpec',
    'build_figure',
    'render_svg',
]
