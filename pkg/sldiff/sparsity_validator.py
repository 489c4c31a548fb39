"""sparsity_validator.py runs the functional checks of semi-local diffusion on sparse synthetic networks.

For each seed it generates a heavy-tailed user-object network (2,000 users,
2,000 objects, density 1e-3), splits it 80/20 and makes the following checks:

    * the ranking score of SLD at some n in 2..6 beats mass diffusion (n = 1)
    * the mean 3-step coverage is below one half

The first check may fail on a few unlucky seeds; it must hold on at least
18 of the 20.

It also times the diffusion on networks of growing size and checks that the
cost per (edge x macro-step x user) stays within 30% of its median.

usage:

    pytest -s sldiff/sparsity_validator.py --runSlow
"""
import os
import time
from dataclasses import replace

import numpy as np
import pytest
from tqdm import tqdm

from . import experiment
from .config import config_from_dict
from .diffusion import diffusion_series
from .graph import build_graph, read_edges, split_train_probe, write_edges
from .synthetic import generate_powerlaw_edges

NUM_NODES = 2000
NUM_LINKS = 4000
SEEDS = range(20)
MIN_WINS = 18

# links per network, users scored and macro-steps for the timing check
RUNTIME_SIZES = (500000, 1000000, 2000000)
RUNTIME_USERS = 20
RUNTIME_STEPS = (2, 4)
RUNTIME_TOLERANCE = 0.3


def write_dataset(directory, seed):
    edges = generate_powerlaw_edges(NUM_NODES, NUM_NODES, NUM_LINKS, seed=seed)
    graph = build_graph(edges)
    assert graph.num_users == NUM_NODES and graph.num_items == NUM_NODES, \
        "seed %d realised %d users and %d objects" % (seed, graph.num_users, graph.num_items)
    assert 1e-4 <= graph.sparsity <= 1e-3 * (1 + 1e-9), \
        "seed %d realised density %.3g" % (seed, graph.sparsity)
    fn = os.path.join(directory, "powerlaw.%d.tsv" % seed)
    write_edges(edges, fn)
    return fn


@pytest.mark.slow
def test_sld_beats_md_on_sparse_networks(tmp_path):
    wins = 0
    for seed in tqdm(SEEDS, desc="seeds"):
        dataset = write_dataset(str(tmp_path), seed)
        cfg = config_from_dict({
            "dataset": dataset,
            "output": str(tmp_path / ("results.%d" % seed)),
            "split": {"ratio": 0.8, "seed": seed},
            "algorithms": [{"name": "SLD", "macro_steps": [1, 2, 3, 4, 5, 6]}],
            "metrics": ["rs"],
        })
        reports = {r.params["macro_steps"]: r.overall
                   for r in experiment.run_experiment(replace(cfg, quiet=True))}
        if min(reports[n] for n in range(2, 7)) < reports[1]:
            wins += 1
        print("seed %d\tMD %.4f\tbest SLD %.4f" % (seed, reports[1], min(reports[n] for n in range(2, 7))))
    assert wins >= MIN_WINS, "SLD beat MD on only %d of %d seeds" % (wins, len(SEEDS))


@pytest.mark.slow
def test_sparse_coverage(tmp_path):
    means = []
    for seed in SEEDS:
        edges = read_edges(write_dataset(str(tmp_path), seed))
        graph = build_graph(split_train_probe(edges, 0.8, seed).training)
        table = experiment.coverage_table(graph, quiet=True)
        means.append(table["coverage"].mean())
    assert np.mean(means) < 0.5, "mean coverage %.3f is not below one half" % np.mean(means)


def time_series(graph, users, macro_steps, repeats=3):
    """Best of ``repeats`` wall times for the diffusion series of ``users``."""
    best = None
    for _ in range(repeats):
        start = time.perf_counter()
        for user in users:
            diffusion_series(graph, user, macro_steps)
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return best


@pytest.mark.slow
def test_runtime_scales_linearly():
    costs = []
    for size in tqdm(RUNTIME_SIZES, desc="sizes"):
        graph = build_graph(generate_powerlaw_edges(size // 4, size // 4, size, seed=1))
        users = np.flatnonzero(graph.user_degree > 0)[:RUNTIME_USERS]
        for n in RUNTIME_STEPS:
            for count in (RUNTIME_USERS // 2, RUNTIME_USERS):
                elapsed = time_series(graph, users[:count], n)
                cost = elapsed / (graph.num_edges * n * count)
                costs.append(cost)
                print("links %d\tn %d\tusers %d\t%.3fs\t%.3g s/unit" % (graph.num_edges, n, count, elapsed, cost))
    median = np.median(costs)
    for cost in costs:
        assert abs(cost / median - 1) <= RUNTIME_TOLERANCE, \
            "cost per unit %.3g is more than 30%% off the median %.3g" % (cost, median)
