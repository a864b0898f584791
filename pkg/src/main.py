"""
SELDA Sim - Main Entry Point
Command-line interface for the hopping-leg simulator and its studies.
"""

from typing import List, Optional
import argparse
import logging
import sys

from src.config import Config
from src.errors import ConfigError, NonFiniteStateError, ResultsIOError, SimulationError
from src.handlers import CharacterizeHandler, CompareHandler, HopHandler, PlotHandler, SweepHandler
from src.output.plotting import PlotKind

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SIMULATION = 2


class UsageError(Exception):
    """Raised instead of exiting when the command line is invalid."""


class CliParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors with exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _add_common(parser: argparse.ArgumentParser, threads: bool = False):
    parser.add_argument('--config', help='parameter file (key = value, units allowed)')
    parser.add_argument('--set', action='append', default=[], metavar='KEY=VALUE',
                        help='override one parameter; may be repeated')
    parser.add_argument('--out', help=f'output directory (default {Config.OUTPUT_DIR})')
    parser.add_argument('--plot', action='store_true', help='also render SVG figures')
    if threads:
        parser.add_argument('--threads', type=int, help='worker processes, capped by SELDA_SIM_THREADS')


def build_parser() -> CliParser:
    """Create the command-line parser with all subcommands."""
    parser = CliParser(prog='selda-sim', description='SELDA hopping-leg simulator')
    parser.add_argument('--debug', action='store_true', help='log at DEBUG level')
    commands = parser.add_subparsers(dest='command', parser_class=CliParser, metavar='COMMAND')
    commands.required = True

    characterize = commands.add_parser('characterize', help='stiffness sweep of the SELDA transmission')
    _add_common(characterize)
    characterize.add_argument('--points', type=int, default=25, help='sweep points over the motor stroke')
    characterize.add_argument('--model', choices=['linear', 'isothermal'], help='transmission model')

    hop = commands.add_parser('hop', help='single hopping trial')
    _add_common(hop)
    hop.add_argument('--label', help='trial label used in the file name')

    compare = commands.add_parser('compare', help='passive comparison of configurations A and B')
    _add_common(compare, threads=True)

    sweep = commands.add_parser('sweep', help='ankle activation timing sweep')
    _add_common(sweep, threads=True)
    sweep.add_argument('--timings', help="'start:stop:step' or a comma list of cycle fractions")

    plot = commands.add_parser('plot', help='render a stored CSV file to SVG')
    plot.add_argument('csv', help='trial log, summary or step table')
    plot.add_argument('--kind', choices=[kind.value for kind in PlotKind], default=PlotKind.TIMESERIES.value)
    plot.add_argument('--columns', required=True, help='comma-separated column names')
    plot.add_argument('--x', default='t', help='x column for time series')
    plot.add_argument('--group', help='grouping column for box plots')
    plot.add_argument('--xlabel')
    plot.add_argument('--ylabel')
    plot.add_argument('--title')
    plot.add_argument('--out', help='output SVG path')

    return parser


HANDLERS = {
    'characterize': CharacterizeHandler,
    'hop': HopHandler,
    'compare': CompareHandler,
    'sweep': SweepHandler,
    'plot': PlotHandler,
}


def cli_main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]

    Returns:
        Exit code: 0 on success, 1 on configuration, usage or file errors,
        2 when a simulation aborts
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_CONFIG

    # Configure logging
    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=logging.DEBUG if (args.debug or Config.DEBUG_MODE) else logging.INFO
    )

    # Validate configuration
    is_valid, error = Config.validate()
    if not is_valid:
        logger.error(f"Configuration error: {error}")
        return EXIT_CONFIG

    logger.debug(f"Configuration: {Config.get_debug_info()}")

    try:
        report = HANDLERS[args.command]().run(args)
    except NonFiniteStateError as e:
        logger.error(f"Simulation aborted: {e}")
        for key, value in e.diagnostics.items():
            logger.error(f"  {key}: {value}")
        return EXIT_SIMULATION
    except SimulationError as e:
        logger.error(f"Simulation aborted: {e}")
        return EXIT_SIMULATION
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ResultsIOError as e:
        logger.error(f"Output error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    print(report, end='')
    return EXIT_OK


def main():
    """Console entry point."""
    sys.exit(cli_main())


if __name__ == '__main__':
    main()
