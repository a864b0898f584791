"""
SELDA Sim - Hop Handler
Handles single hopping trials.
"""

import argparse
import logging

from src.config import Config
from src.errors import InsufficientStepsError
from src.experiments.gait_analysis import analyze_trial
from src.experiments.trial import run_trial
from src.model.config_loader import load_parameter_set
from src.storage.results_store import ResultsStore
from src.utils.formatters import format_leg_geometry, format_trial_metrics

logger = logging.getLogger(__name__)


class HopHandler:
    """Handles the hop command."""

    def run(self, args: argparse.Namespace) -> str:
        """
        Run one trial, save its log and report its gait metrics.

        Args:
            args: Parsed command-line arguments

        Returns:
            Report text
        """
        params, settings, controller = load_parameter_set(args.config, args.set)
        label = args.label or 'hop'
        store = ResultsStore(args.out or Config.OUTPUT_DIR)

        log = run_trial(params, settings, controller, label=label)
        path = store.save_trial_log(log)

        try:
            metrics = analyze_trial(log, params)
        except InsufficientStepsError as e:
            logger.warning(f"Trial {label}: {e}")
            metrics = None

        report = format_trial_metrics(label, metrics) + format_leg_geometry(params)
        return report + f"\n  Log written to {path}\n"
