from .config import config_from_args
from .experiment import run_experiment


def run(parser, args):
    config = config_from_args(args)
    run_experiment(config)
