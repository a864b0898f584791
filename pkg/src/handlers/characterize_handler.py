"""
SELDA Sim - Characterize Handler
Handles the quasi-static stiffness sweep of the SELDA transmission.
"""

from pathlib import Path
import argparse
import logging

import numpy as np

from src.config import Config
from src.errors import ConfigValidationError
from src.experiments.studies import characterize
from src.model.config_loader import load_parameter_set
from src.model.params import SeldaModel
from src.output.csv_io import stiffness_frame
from src.output.plotting import PlotKind, PlotSpec, render_svg
from src.storage.results_store import ResultsStore
from src.utils.formatters import format_characterization

logger = logging.getLogger(__name__)


class CharacterizeHandler:
    """Handles the characterize command."""

    def run(self, args: argparse.Namespace) -> str:
        """
        Sweep the motor over its stroke with the foot clamped and fit the stiffness.

        Args:
            args: Parsed command-line arguments

        Returns:
            Report text
        """
        params, _, _ = load_parameter_set(args.config, args.set)
        if not params.has_foot:
            raise ConfigValidationError('leg_config', "characterization needs configuration B")
        if args.points < 2:
            raise ConfigValidationError('points', f"need at least 2 sweep points, got {args.points}")

        model = SeldaModel(args.model) if args.model else None
        result = characterize(params, np.linspace(0.0, params.motor_stroke, args.points), model)

        out = Path(args.out or Config.OUTPUT_DIR)
        if out.suffix.lower() == '.csv':
            store = ResultsStore(out.parent)
            path = store.save_stiffness_curve(result, out)
        else:
            store = ResultsStore(out)
            path = store.save_stiffness_curve(result)

        if args.plot:
            render_svg(PlotSpec(
                kind=PlotKind.SCATTER,
                selectors=('motor_angle', 'torque'),
                x_label='motor angle [rad]',
                y_label='line torque [N*m]',
                output_path=path.with_suffix('.svg'),
                title=f"fitted stiffness {result.stiffness:.3f} N*m/rad",
            ), stiffness_frame(result))

        logger.info(f"Stiffness curve written to {path}")
        return format_characterization(result, params.selda_stiffness) + f"\n  Written to {path}\n"
