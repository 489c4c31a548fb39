import os

from .experiment import say
from .graph import write_edges
from .synthetic import generate_powerlaw_edges


def run(parser, args):
    edges = generate_powerlaw_edges(args.users, args.items, args.links,
                                    exponent=args.exponent, seed=args.seed)
    directory = os.path.dirname(args.output)
    if directory:
        os.makedirs(directory, exist_ok=True)
    write_edges(edges, args.output)
    say("wrote %d links between %d users and %d objects to %s" % (
        len(edges), edges.num_users, edges.num_items, args.output), args.quiet)
