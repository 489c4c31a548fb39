from .experiment import say, warn
from .graph import read_edges, split_train_probe, write_split


def run(parser, args):
    ratio = 0.8 if args.ratio is None else args.ratio
    seed = 1 if args.seed is None else args.seed
    edges = read_edges(args.dataset, rating_threshold=args.rating_threshold)
    if edges.duplicates:
        warn("dropped %d repeated interactions" % edges.duplicates, args.quiet)
    split = split_train_probe(edges, ratio, seed)
    write_split(split, args.output_directory)
    say("%d training and %d probe links written to %s" % (
        len(split.training), len(split.probe), args.output_directory), args.quiet)
