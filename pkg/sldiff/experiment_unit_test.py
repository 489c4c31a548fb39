# experiment_unit_test.py contains unit tests for experiment runs, sweeps, coverage and top-L export
import filecmp
import json
import os
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from . import experiment
from .config import AlgorithmSpec, config_from_dict
from .diffusion import DiffusionParams, score_user
from .errors import ConfigError
from .experiment import Optimum
from .graph import write_edges
from .metrics import ProbeEvaluation
from .ranking import rank_user
from .report import MetricReport
from .synthetic import generate_powerlaw_edges


@pytest.fixture
def synthetic_dataset(tmp_path):
    fn = tmp_path / "synthetic.tsv"
    write_edges(generate_powerlaw_edges(300, 120, 3000, seed=5), str(fn))
    return str(fn)


def experiment_config(dataset, output, quiet=False, **kwargs):
    raw = {
        "dataset": dataset,
        "output": output,
        "algorithms": [{"name": "SLD", "macro_steps": [1, 2, 3]},
                       {"name": "RENBI", "thetas": [-0.5, 0.5]}],
        "L": [5, 10],
        "workers": 1,
    }
    raw.update(kwargs)
    # quiet is a runtime switch, not a configuration key
    return replace(config_from_dict(raw), quiet=quiet)


def test_run_experiment_outputs(tmp_path, synthetic_dataset):
    output = str(tmp_path / "results")
    cfg = experiment_config(synthetic_dataset, output, all_users=True)
    reports = experiment.run_experiment(replace(cfg, quiet=True))

    # five grid points, each with rs plus recall and hits at two list lengths
    assert len(reports) == 25
    names = {r.name for r in reports}
    assert "SLD_n2.rs" in names
    assert "RENBI_thetam0.5.recall.L10" in names
    for report in reports:
        assert os.path.exists(os.path.join(output, report.name + ".csv"))
        assert os.path.exists(os.path.join(output, report.name + ".json"))
        assert 0 < report.overall <= 1
    for fn in ("manifest.json", "run.log.txt", "users.tsv", "items.tsv", "SLD_n1.top10.tsv"):
        assert os.path.exists(os.path.join(output, fn)), "%s was not written" % fn

    with open(os.path.join(output, "manifest.json")) as fh:
        manifest = json.load(fh)
    assert manifest["seed"] == 1 and manifest["ratio"] == 0.8
    assert manifest["counts"]["training"] == 2400 and manifest["counts"]["probe"] == 600
    assert manifest["config_hash"] == cfg.config_hash()
    assert len(manifest["reports"]) == 25

    rs = pd.read_csv(os.path.join(output, "SLD_n1.rs.csv"))
    assert set(rs["axis"]) == {"user", "item"}
    assert list(rs.columns[:9]) == ["metric", "algorithm", "label", "lambda", "macro_steps",
                                    "theta", "L", "overall", "skipped"]


def test_run_experiment_matches_direct_evaluation(tmp_path, synthetic_dataset):
    cfg = experiment_config(synthetic_dataset, str(tmp_path / "results"), quiet=True)
    reports = {r.name: r for r in experiment.run_experiment(cfg)}

    _, split, graph = experiment.load_split(cfg)
    lists = {}
    for user in np.unique(split.probe.users):
        if graph.user_degree[user] > 0:
            scores = score_user(graph, user, DiffusionParams("SLD", macro_steps=2))
            lists[int(user)] = rank_user(graph, user, scores)
    evaluation = ProbeEvaluation.from_ranked_lists(lists, split.probe, graph)
    assert reports["SLD_n2.rs"].overall == pytest.approx(evaluation.ranking_score().value, abs=1e-12)
    assert reports["SLD_n2.recall.L5"].overall == pytest.approx(evaluation.recall(5).value, abs=1e-12)
    assert reports["SLD_n2.rs"].skipped == evaluation.skipped


def test_run_experiment_deterministic_across_workers(tmp_path, synthetic_dataset):
    first = str(tmp_path / "one")
    second = str(tmp_path / "two")
    experiment.run_experiment(experiment_config(synthetic_dataset, first, quiet=True))
    experiment.run_experiment(replace(experiment_config(synthetic_dataset, second, quiet=True), workers=3))

    csvs = sorted(fn for fn in os.listdir(first) if fn.endswith(".csv"))
    assert csvs == sorted(fn for fn in os.listdir(second) if fn.endswith(".csv"))
    match, mismatch, errors = filecmp.cmpfiles(first, second, csvs, shallow=False)
    assert not mismatch and not errors, "outputs differ between worker counts: %s" % mismatch


def fake_report(label, params, value):
    return MetricReport("rs", algorithm=params["algorithm"], label=label, params=params, overall=value)


def test_sweep_optimal_tie_break(tmp_path, synthetic_dataset):
    cfg = config_from_dict({"dataset": synthetic_dataset, "output": str(tmp_path),
                            "algorithms": [{"name": "SLD", "macro_steps": [1, 2, 3]}]})
    reports = [fake_report("SLD_n%d" % n, {"algorithm": "SLD", "lambda": 1.0, "macro_steps": n, "theta": None},
                           value) for n, value in ((1, 0.2), (2, 0.1), (3, 0.1))]
    optima = experiment.sweep_optimal(cfg, "rs", reports=reports)
    assert optima["SLD"].label == "SLD_n2", "ties must go to the smaller parameter"
    assert optima["SLD"].value == 0.1


def test_sweep_optimal_run(tmp_path, synthetic_dataset):
    cfg = experiment_config(synthetic_dataset, str(tmp_path / "results"), quiet=True)
    reports = experiment.run_experiment(cfg)
    optima = experiment.sweep_optimal(cfg, "rs", reports=reports)
    assert set(optima) == {"SLD", "RENBI"}
    best = min(r.overall for r in reports if r.algorithm == "SLD" and r.metric == "rs")
    assert optima["SLD"].value == best

    recall = experiment.sweep_optimal(cfg, "recall", reports=reports, L=10)
    assert recall["RENBI"].L == 10
    fn = experiment.write_optima(recall, cfg.output, "recall", 10)
    assert os.path.basename(fn) == "optimal.recall.L10.csv"
    assert list(pd.read_csv(fn)["algorithm"]) == ["SLD", "RENBI"]


def test_sweep_optimal_rejects(tmp_path, synthetic_dataset):
    cfg = experiment_config(synthetic_dataset, str(tmp_path), metrics=["rs"])
    with pytest.raises(ConfigError):
        experiment.sweep_optimal(replace(cfg, algorithms=(AlgorithmSpec("MD"),)), "rs", reports=[])
    with pytest.raises(ConfigError):
        experiment.sweep_optimal(cfg, "recall", reports=[])
    with pytest.raises(ConfigError):
        experiment.sweep_optimal(cfg, "precision", reports=[])
    with pytest.raises(ConfigError):
        experiment.sweep_optimal(replace(cfg, metrics=("rs", "hits")), "hits", reports=[], L=7)


def test_coverage_table(g1):
    table = experiment.coverage_table(g1, quiet=True)
    assert table["user"].tolist() == [0, 1]
    assert table["coverage"].tolist() == [1.0, 1.0]
    report = experiment.coverage_report(table, a=0.5 * np.log(5))
    assert report.overall == 1.0
    assert report.name == "coverage_t3.coverage"
    with pytest.raises(ConfigError):
        experiment.coverage_table(g1, steps=2, quiet=True)


def test_top_lists(tmp_path, g1):
    frame = experiment.top_lists(g1, DiffusionParams("MD"), 2, quiet=True)
    assert frame["item"].tolist() == [2, 0]
    assert frame["score"].tolist() == pytest.approx([0.25, 0.25])
    fn = str(tmp_path / "top.tsv")
    experiment.write_top_lists(frame, g1, fn)
    with open(fn) as fh:
        assert fh.read() == "u1\ti3\t0.25\t1\nu2\ti1\t0.25\t1\n"


def test_chunks_are_fixed_size():
    chunks = experiment.chunked(np.arange(150))
    assert [len(c) for c in chunks] == [64, 64, 22]
    assert experiment.chunked([]) == []


def test_optimum_is_frozen():
    optimum = Optimum("SLD", "SLD_n2", {}, "rs", None, 0.1)
    with pytest.raises(Exception):
        optimum.value = 0.2
