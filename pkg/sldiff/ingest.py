import json
import sys

from .experiment import say, warn
from .graph import build_graph, read_edges

STAT_FIELDS = ["users", "objects", "links", "sparsity", "duplicates", "filtered"]


def dataset_stats(edges):
    """Size and sparsity of an interaction data set.

    Users and objects count every id that appears, including those whose
    interactions were all removed by a rating threshold.

    Returns
    -------
    dict
        users, objects, links, sparsity (links / (users * objects)),
        duplicates and filtered interaction counts
    """
    graph = build_graph(edges)
    return {
        "users": graph.num_users,
        "objects": graph.num_items,
        "links": graph.num_edges,
        "sparsity": graph.sparsity,
        "duplicates": edges.duplicates,
        "filtered": edges.filtered,
    }


def run(parser, args):
    say("reading %s" % args.dataset, args.quiet)
    edges = read_edges(args.dataset, rating_threshold=args.rating_threshold)
    if edges.duplicates:
        warn("dropped %d repeated interactions" % edges.duplicates, args.quiet)
    stats = dataset_stats(edges)

    print("\t".join(STAT_FIELDS), file=sys.stdout)
    print("%d\t%d\t%d\t%.6g\t%d\t%d" % tuple(stats[f] for f in STAT_FIELDS), file=sys.stdout)

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(stats, fh, indent=4, sort_keys=True)
