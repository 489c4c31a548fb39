import numpy as np
import pytest

from .graph import build_edge_set, build_graph

# two users, three objects: u1 -> {i1, i2}, u2 -> {i2, i3}
G1_EDGES = [("u1", "i1"), ("u1", "i2"), ("u2", "i2"), ("u2", "i3")]


def pytest_addoption(parser):
    parser.addoption(
        "--runSlow",
        action="store_true",
        default=False,
        help="run the slow synthetic-data validation tests")


def pytest_configure(config):
    # register an additional marker
    config.addinivalue_line(
        "markers", "slow: mark test as slow to run (needs --runSlow)"
    )


def pytest_runtest_setup(item):
    if item.get_closest_marker("slow") and not item.config.getoption("--runSlow"):
        pytest.skip("slow test, run with --runSlow")


@pytest.fixture
def g1():
    return build_graph(G1_EDGES)


def dense_w(graph, lam):
    """The hybrid matrix W assembled entry by entry from the adjacency matrix."""
    a = graph.user_adj.toarray()
    k_users = a.sum(axis=1)
    k_items = a.sum(axis=0)
    num_items = graph.num_items
    w = np.zeros((num_items, num_items))
    for alpha in range(num_items):
        for beta in range(num_items):
            if k_items[alpha] == 0 or k_items[beta] == 0:
                continue
            shared = sum(a[j, alpha] * a[j, beta] / k_users[j]
                         for j in range(graph.num_users) if k_users[j] > 0)
            w[alpha, beta] = shared / (k_items[alpha] ** (1 - lam) * k_items[beta] ** lam)
    return w


def random_edges(seed, num_users, num_items, density=0.3):
    """A random edge set in which every user has at least one link."""
    rng = np.random.default_rng(seed)
    pairs = []
    for user in range(num_users):
        items = np.flatnonzero(rng.random(num_items) < density)
        if len(items) == 0:
            items = [rng.integers(num_items)]
        pairs.extend(("u%d" % user, "i%d" % item) for item in items)
    return build_edge_set(pairs)


@pytest.fixture
def random_graph():
    """Factory for small random bipartite graphs: random_graph(seed, N, M)."""
    def factory(seed, num_users=12, num_items=15, density=0.3):
        return build_graph(random_edges(seed, num_users, num_items, density))
    return factory
