"""
SELDA Sim - Sweep Handler
Handles the ankle activation timing sweep.
"""

import argparse
import logging

from src.config import Config
from src.experiments.studies import DEFAULT_TIMINGS, parse_timings, timing_sweep
from src.model.config_loader import load_parameter_set
from src.output.plotting import PlotKind, PlotSpec, render_svg
from src.storage.results_store import ResultsStore
from src.utils.formatters import format_sweep

logger = logging.getLogger(__name__)


class SweepHandler:
    """Handles the sweep command."""

    def run(self, args: argparse.Namespace) -> str:
        """
        Run the passive baseline and one active trial per timing.

        Args:
            args: Parsed command-line arguments

        Returns:
            Report text
        """
        params, settings, controller = load_parameter_set(args.config, args.set)
        timings = parse_timings(args.timings) if args.timings else list(DEFAULT_TIMINGS)

        result = timing_sweep(settings, timings, params, controller, threads=args.threads)

        store = ResultsStore(args.out or Config.OUTPUT_DIR)
        for trial in result.trials:
            store.save_trial_log(trial.log, trial.params.leg_config.value, trial.label)
        metadata = {'study': 'sweep', 'timings': ', '.join(f"{t:g}" for t in sorted(timings))}
        store.save_summary(result.summary(), metadata)
        steps = result.steps()
        store.save_steps(steps, metadata)
        logger.info(f"Saved {len(result.trials)} trial logs and the summary to {store.out_dir}")

        if args.plot and not steps.empty:
            for metric in ('step_length', 'step_height'):
                render_svg(PlotSpec(
                    kind=PlotKind.BOXPLOT,
                    selectors=(metric,),
                    x_label='ankle activation',
                    y_label=f"{metric.replace('_', ' ')} [m]",
                    output_path=store.path_for(f"sweep_{metric}.svg"),
                    group_column='label',
                ), steps)
            render_svg(PlotSpec(
                kind=PlotKind.SCATTER,
                selectors=('t_T', 'mean_velocity'),
                x_label='activation start [cycle fraction]',
                y_label='mean velocity [m/s]',
                output_path=store.path_for('sweep_velocity.svg'),
            ), result.summary().dropna(subset=['t_T']))

        return format_sweep(result) + f"\n  Results written to {store.out_dir}\n"
