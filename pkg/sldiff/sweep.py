import sys

from .config import config_from_args
from .experiment import run_experiment, say, sweep_optimal, write_optima


def run(parser, args):
    config = config_from_args(args).validate()
    # check the sweep is well formed before anything is scored
    sweep_optimal(config, args.optimise, reports=[])

    reports = run_experiment(config)
    L = None if args.optimise == "rs" else config.lengths[0]
    optima = sweep_optimal(config, args.optimise, reports=reports, L=L)
    fn = write_optima(optima, config.output, args.optimise, L)

    for optimum in optima.values():
        print("%s\t%s\t%.6g" % (optimum.algorithm, optimum.label, optimum.value), file=sys.stdout)
    say("optimal parameters written to %s" % fn, config.quiet)
