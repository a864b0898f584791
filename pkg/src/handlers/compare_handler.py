"""
SELDA Sim - Compare Handler
Handles the passive comparison of leg configurations A and B.
"""

import argparse
import logging

from src.config import Config
from src.experiments.studies import compare_configurations
from src.model.config_loader import apply_overrides, load_parameter_set
from src.output.plotting import PlotKind, PlotSpec, render_svg
from src.storage.results_store import ResultsStore
from src.utils.formatters import format_comparison

logger = logging.getLogger(__name__)


class CompareHandler:
    """Handles the compare command."""

    def run(self, args: argparse.Namespace) -> str:
        """
        Run both configurations with the passive foot and store logs and summary.

        The loaded file and overrides apply to both legs; only the topology
        keys differ between the two trials.

        Args:
            args: Parsed command-line arguments

        Returns:
            Report text
        """
        parameter_set = load_parameter_set(args.config, args.set)
        params_a = apply_overrides(parameter_set, ['leg_config=A'])[0]
        params_b = apply_overrides(parameter_set, ['leg_config=B'])[0]
        _, settings, controller = parameter_set

        report = compare_configurations(settings, controller, params_a, params_b, threads=args.threads)

        store = ResultsStore(args.out or Config.OUTPUT_DIR)
        for trial in (report.trial_a, report.trial_b):
            store.save_trial_log(trial.log, trial.params.leg_config.value, trial.label)
        metadata = {'study': 'compare'}
        store.save_summary(report.summary(), metadata)
        steps = report.steps()
        store.save_steps(steps, metadata)

        if args.plot and not steps.empty:
            for metric, unit in (('step_length', 'm'), ('step_height', 'm')):
                render_svg(PlotSpec(
                    kind=PlotKind.BOXPLOT,
                    selectors=(metric,),
                    x_label='configuration',
                    y_label=f"{metric.replace('_', ' ')} [{unit}]",
                    output_path=store.path_for(f"compare_{metric}.svg"),
                    group_column='label',
                ), steps)

        return format_comparison(report) + f"\n  Results written to {store.out_dir}\n"
