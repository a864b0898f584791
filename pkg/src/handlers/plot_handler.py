"""
SELDA Sim - Plot Handler
Handles rendering a stored CSV file to SVG.
"""

from pathlib import Path
import argparse
import logging

from src.output.csv_io import read_frame_csv
from src.output.plotting import PlotKind, PlotSpec, render_svg

logger = logging.getLogger(__name__)


def parse_columns(text: str) -> tuple:
    return tuple(name.strip() for name in text.split(',') if name.strip())


class PlotHandler:
    """Handles the plot command."""

    def run(self, args: argparse.Namespace) -> str:
        """
        Render columns of a trial log, summary or step table.

        Args:
            args: Parsed command-line arguments

        Returns:
            Report text
        """
        frame, _ = read_frame_csv(args.csv)
        source = Path(args.csv)
        output = Path(args.out) if args.out else source.with_suffix('.svg')

        spec = PlotSpec(
            kind=PlotKind(args.kind),
            selectors=parse_columns(args.columns),
            x_label=args.xlabel or '',
            y_label=args.ylabel or '',
            output_path=output,
            x_column=args.x,
            group_column=args.group,
            title=args.title,
        )
        path = render_svg(spec, frame)
        return f"Plot written to {path}\n"
