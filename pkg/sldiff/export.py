import os

from .config import default_workers
from .diffusion import Algorithm, DiffusionParams
from .errors import ConfigError
from .experiment import say, top_lists, warn, write_top_lists
from .graph import build_graph, read_edges, read_split


def export_params(args):
    """DiffusionParams from the export-topl flags; irrelevant flags are ignored."""
    algorithm = Algorithm(args.algorithm)
    kwargs = {}
    if algorithm is Algorithm.HYBRID:
        kwargs["lam"] = args.lam
    if algorithm in (Algorithm.SLD, Algorithm.USLD, Algorithm.OSLD):
        kwargs["macro_steps"] = args.macro_steps
    if algorithm in (Algorithm.USLD, Algorithm.OSLD, Algorithm.RENBI):
        if args.theta is None:
            raise ConfigError("--theta is required for %s" % algorithm.value)
        kwargs["theta"] = args.theta
    return DiffusionParams(algorithm, **kwargs)


def run(parser, args):
    params = export_params(args)
    if args.L < 1:
        raise ConfigError("list length L must be a positive integer (got %s)" % args.L)
    workers = default_workers() if args.workers is None else args.workers
    if workers < 1:
        raise ConfigError("workers must be a positive integer (got %s)" % workers)

    # a stored split recommends from its training links
    if os.path.isdir(args.dataset):
        graph = build_graph(read_split(args.dataset).training)
    else:
        edges = read_edges(args.dataset, rating_threshold=args.rating_threshold)
        if edges.duplicates:
            warn("dropped %d repeated interactions" % edges.duplicates, args.quiet)
        graph = build_graph(edges)

    cold = len(graph.cold_users())
    if cold:
        warn("%d users have no links and get no list" % cold, args.quiet)
    say("ranking objects for %d users with %s" % (graph.num_users - cold, params.label()), args.quiet)
    frame = top_lists(graph, params, args.L, workers=workers, quiet=args.quiet)
    directory = os.path.dirname(args.output)
    if directory:
        os.makedirs(directory, exist_ok=True)
    write_top_lists(frame, graph, args.output)
    say("wrote %d recommendations to %s" % (len(frame.index), args.output), args.quiet)
