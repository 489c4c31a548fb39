# synthetic_unit_test.py contains unit tests for the synthetic network generator
import numpy as np
import pytest

from . import synthetic
from .errors import ConfigError
from .graph import build_graph


def test_generate_exact_link_count():
    edges = synthetic.generate_powerlaw_edges(50, 40, 300, seed=1)
    assert len(edges) == 300
    assert edges.duplicates == 0
    assert len(set(edges.pairs())) == 300, "links must be distinct"
    assert all(u.startswith("u") for u in edges.user_ids)
    assert all(i.startswith("i") for i in edges.item_ids)


def test_generate_is_seeded():
    first = synthetic.generate_powerlaw_edges(50, 40, 300, seed=2)
    again = synthetic.generate_powerlaw_edges(50, 40, 300, seed=2)
    other = synthetic.generate_powerlaw_edges(50, 40, 300, seed=3)
    assert first.pairs() == again.pairs()
    assert first.pairs() != other.pairs()


def test_generate_heavy_tail():
    g = build_graph(synthetic.generate_powerlaw_edges(500, 500, 3000, exponent=1.0, seed=0))
    degrees = np.sort(g.item_degree)[::-1]
    assert degrees[0] > 10 * np.median(degrees), "degrees are not heavy tailed"


def test_generate_rejects_impossible():
    with pytest.raises(ConfigError):
        synthetic.generate_powerlaw_edges(2, 2, 5)
    with pytest.raises(ConfigError):
        synthetic.generate_powerlaw_edges(2, 2, 0)


def test_generate_touches_every_node():
    edges = synthetic.generate_powerlaw_edges(2000, 2000, 4000, seed=0)
    g = build_graph(edges)
    assert g.num_users == 2000 and g.num_items == 2000
    assert g.user_degree.min() >= 1 and g.item_degree.min() >= 1
    assert g.sparsity == pytest.approx(1e-3)

    g = build_graph(synthetic.generate_powerlaw_edges(30, 7, 30, seed=4))
    assert g.num_users == 30 and g.num_items == 7
    assert g.num_edges == 30


def test_generate_needs_enough_links():
    with pytest.raises(ConfigError):
        synthetic.generate_powerlaw_edges(100, 10, 99)
