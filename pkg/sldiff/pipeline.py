#!/usr/bin/env python

import argparse
import sys

from clint.textui import colored

from . import version
from .errors import ConfigError, DataError


def run_subtool(parser, args):
    if args.command == 'generate':
        from . import generate as submodule
    if args.command == 'ingest':
        from . import ingest as submodule
    if args.command == 'split':
        from . import split as submodule
    if args.command == 'run':
        from . import run as submodule
    if args.command == 'sweep':
        from . import sweep as submodule
    if args.command == 'coverage':
        from . import coverage as submodule
    if args.command == 'export-topl':
        from . import export as submodule

    # run the chosen submodule.
    submodule.run(parser, args)


class ArgumentParserWithDefaults(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super(ArgumentParserWithDefaults, self).__init__(*args, **kwargs)
        self.add_argument("-q", "--quiet", help="Do not output warnings or progress to stderr",
                          action="store_true",
                          dest="quiet")


def add_dataset_arguments(parser):
    parser.add_argument('--rating-threshold', type=float, dest='rating_threshold',
                        help='Only interactions rated at least this value become links')


def add_split_arguments(parser):
    parser.add_argument('--ratio', type=float,
                        help='Fraction of links kept for training (default: 0.8)')
    parser.add_argument('--seed', type=int,
                        help='Seed of the random split (default: 1)')


def add_workers_argument(parser):
    parser.add_argument('--workers', type=int,
                        help='Worker processes (default: $SLDIFF_WORKERS or 1)')


def add_experiment_arguments(parser):
    parser.add_argument('dataset', metavar='dataset', nargs='?',
                        help='Interaction file (user<TAB>item[<TAB>rating]); overrides the config file')
    parser.add_argument('--config', metavar='config',
                        help='Experiment configuration (.toml or .json)')
    parser.add_argument('--output', metavar='output',
                        help='Directory for reports (default: results)')
    parser.add_argument('--algorithm', type=str.upper,
                        choices=['HYBRID', 'MD', 'HC', 'SLD', 'USLD', 'OSLD', 'RENBI'],
                        help='Evaluate this algorithm instead of the configured ones')
    parser.add_argument('--lambdas', type=float, nargs='+', metavar='lambda',
                        help='Hybrid lambda grid for --algorithm')
    parser.add_argument('--macro-steps', type=int, nargs='+', metavar='n', dest='macro_steps',
                        help='Macro-step grid for --algorithm')
    parser.add_argument('--thetas', type=float, nargs='+', metavar='theta',
                        help='Theta grid for --algorithm')
    parser.add_argument('--L', type=int, nargs='+', metavar='L', dest='L',
                        help='Recommendation list lengths for recall and hits (default: 20)')
    parser.add_argument('--metrics', nargs='+', choices=['rs', 'recall', 'hits'],
                        help='Metrics to report (default: all)')
    parser.add_argument('--all-users', action='store_true', dest='all_users',
                        help='Score every user and write the top-L lists as well')
    add_dataset_arguments(parser)
    add_split_arguments(parser)
    add_workers_argument(parser)


def init_pipeline_parser():
    """Wraps the argparse parser initialisation.

    Returns
    -------
    argparse.ArgumentParser
        The initialised argparse Argument Parser for the pipeline
    """
    parser = argparse.ArgumentParser(
        prog='sldiff', formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument("-v", "--version", help="Installed sldiff version",
                        action="version",
                        version="%(prog)s " + str(version.__version__))
    subparsers = parser.add_subparsers(
        title='[sub-commands]', dest='command', parser_class=ArgumentParserWithDefaults)

    # generate
    parser_generate = subparsers.add_parser(
        'generate', help='Write a synthetic heavy-tailed user-object network')
    parser_generate.add_argument('output', metavar='output', help='Interaction file to write')
    parser_generate.add_argument('--users', type=int, default=2000, help='Number of users')
    parser_generate.add_argument('--items', type=int, default=1000, help='Number of objects')
    parser_generate.add_argument('--links', type=int, default=20000, help='Number of distinct links')
    parser_generate.add_argument('--exponent', type=float, default=0.8,
                                 help='Zipf exponent of the endpoint popularity')
    parser_generate.add_argument('--seed', type=int, default=0, help='Random seed')
    parser_generate.set_defaults(func=run_subtool)

    # ingest
    parser_ingest = subparsers.add_parser(
        'ingest', help='Validate an interaction file and print its statistics')
    parser_ingest.add_argument('dataset', metavar='dataset', help='Interaction file')
    parser_ingest.add_argument('--json', metavar='json', help='Also write the statistics to this JSON file')
    add_dataset_arguments(parser_ingest)
    parser_ingest.set_defaults(func=run_subtool)

    # split
    parser_split = subparsers.add_parser(
        'split', help='Split an interaction file into training and probe links')
    parser_split.add_argument('dataset', metavar='dataset', help='Interaction file')
    parser_split.add_argument('output_directory', metavar='output_directory',
                              help='Directory for training.tsv, probe.tsv and the id maps')
    add_dataset_arguments(parser_split)
    add_split_arguments(parser_split)
    parser_split.set_defaults(func=run_subtool)

    # run
    parser_run = subparsers.add_parser(
        'run', help='Evaluate every configured grid point on a random split')
    add_experiment_arguments(parser_run)
    parser_run.set_defaults(func=run_subtool)

    # sweep
    parser_sweep = subparsers.add_parser(
        'sweep', help='Evaluate the configured grids and report the optimal parameters')
    add_experiment_arguments(parser_sweep)
    parser_sweep.add_argument('--optimise', choices=['rs', 'recall', 'hits'], default='rs',
                              help='Metric the optimum is chosen by')
    parser_sweep.set_defaults(func=run_subtool)

    # coverage
    parser_coverage = subparsers.add_parser(
        'coverage', help='Per-user coverage of the diffusion and its degree-binned means')
    parser_coverage.add_argument('dataset', metavar='dataset', help='Interaction file')
    parser_coverage.add_argument('--output', metavar='output', default='results',
                                 help='Directory for the coverage table and report')
    parser_coverage.add_argument('--steps', type=int, default=3,
                                 help='Odd number of hops of the walk')
    parser_coverage.add_argument('--denominator', choices=['all', 'uncollected'], default='all',
                                 help='Divide by all objects or by the objects the user has not collected')
    parser_coverage.add_argument('--log-base', choices=['e', '10', '2'], default='e', dest='log_base',
                                 help='Base of the logarithm in the degree bin width')
    parser_coverage.add_argument('--split', action='store_true',
                                 help='Measure on the training part of a random split instead of all links')
    add_dataset_arguments(parser_coverage)
    add_split_arguments(parser_coverage)
    add_workers_argument(parser_coverage)
    parser_coverage.set_defaults(func=run_subtool)

    # export-topl
    parser_export = subparsers.add_parser(
        'export-topl', help='Write every user\'s top-L recommendation list')
    parser_export.add_argument('dataset', metavar='dataset',
                               help='Interaction file, or a directory written by the split sub-command')
    parser_export.add_argument('output', metavar='output', help='TSV file to write')
    parser_export.add_argument('--algorithm', type=str.upper, default='SLD',
                               choices=['HYBRID', 'MD', 'HC', 'SLD', 'USLD', 'OSLD', 'RENBI'],
                               help='Scoring algorithm')
    parser_export.add_argument('--lambda', type=float, default=1.0, dest='lam',
                               help='Hybrid lambda')
    parser_export.add_argument('--macro-steps', type=int, default=3, dest='macro_steps',
                               help='Macro-steps for SLD, USLD and OSLD')
    parser_export.add_argument('--theta', type=float, help='Theta for USLD, OSLD and RENBI')
    parser_export.add_argument('--L', type=int, default=20, dest='L', help='List length')
    add_dataset_arguments(parser_export)
    add_workers_argument(parser_export)
    parser_export.set_defaults(func=run_subtool)

    # return the parser
    return parser


def main():

    # init the pipeline parser
    parser = init_pipeline_parser()

    # collect the args
    args = parser.parse_args(sys.argv[1:])

    # run the subcommand or print usage if no subcommand provided
    if not args.command:
        parser.print_usage()
        return
    try:
        args.func(parser, args)
    except ConfigError as e:
        print(colored.red("Error: ") + str(e), file=sys.stderr)
        raise SystemExit(2)
    except DataError as e:
        print(colored.red("Error: ") + str(e), file=sys.stderr)
        raise SystemExit(3)


if __name__ == "__main__":
    main()
