import os

from .config import LOG_BASES, default_workers
from .errors import ConfigError
from .experiment import coverage_report, coverage_table, say, warn
from .graph import build_graph, read_edges, split_train_probe
from .metrics import bin_scale


def run(parser, args):
    workers = default_workers() if args.workers is None else args.workers
    if workers < 1:
        raise ConfigError("workers must be a positive integer (got %s)" % workers)
    edges = read_edges(args.dataset, rating_threshold=args.rating_threshold)
    if edges.duplicates:
        warn("dropped %d repeated interactions" % edges.duplicates, args.quiet)
    if args.split:
        split = split_train_probe(edges, 0.8 if args.ratio is None else args.ratio,
                                  1 if args.seed is None else args.seed)
        graph = build_graph(split.training)
    else:
        graph = build_graph(edges)

    os.makedirs(args.output, exist_ok=True)
    say("measuring %d-step coverage of %d users" % (args.steps, graph.num_users), args.quiet)
    table = coverage_table(graph, args.steps, args.denominator, workers, args.quiet)
    report = coverage_report(table, bin_scale(LOG_BASES[args.log_base]), args.steps, args.denominator)

    # per-user values with external ids
    out = table.copy()
    out.insert(0, "id", graph.user_ids[out["user"].to_numpy(dtype="int64")])
    out.to_csv(os.path.join(args.output, "%s.users.tsv" % report.label), sep='\t', index=False,
               float_format="%.12g", lineterminator="\n")
    report.write(args.output)
    say("mean coverage %.6g over %d users" % (report.overall, report.evaluated), args.quiet)
