# config_unit_test.py contains unit tests for experiment configuration handling
import json
from dataclasses import replace

import pytest

from . import config
from . import pipeline
from .config import AlgorithmSpec, ExperimentConfig
from .diffusion import Algorithm
from .errors import ConfigError, DataError

TOML_CONFIG = """
dataset = "{dataset}"
output = "{output}"
metrics = ["rs", "recall"]
L = [10, 20]
hits_subsets = [{{axis = "user", max_degree = 3}}]

[split]
ratio = 0.9
seed = 4

[[algorithms]]
name = "SLD"
macro_steps = [1, 2, 3]

[[algorithms]]
name = "hybrid"
lambdas = [0.0, 0.5]
"""


@pytest.fixture
def dataset(tmp_path):
    fn = tmp_path / "g1.tsv"
    fn.write_text("u1\ti1\nu1\ti2\nu2\ti2\nu2\ti3\n")
    return str(fn)


def test_load_toml(tmp_path, dataset):
    fn = tmp_path / "experiment.toml"
    fn.write_text(TOML_CONFIG.format(dataset=dataset, output=tmp_path / "out"))
    cfg = config.load_config(str(fn))
    assert cfg.dataset == dataset
    assert cfg.ratio == 0.9 and cfg.seed == 4
    assert cfg.lengths == (10, 20)
    assert cfg.metrics == ("rs", "recall")
    assert [spec.name for spec in cfg.algorithms] == [Algorithm.SLD, Algorithm.HYBRID]
    assert [p.label() for p in cfg.grid_points()] == [
        "SLD_n1", "SLD_n2", "SLD_n3", "HYBRID_lambda0", "HYBRID_lambda0.5"]
    assert cfg.hits_subsets[0].name == "user_degree<=3"
    cfg.validate()
    assert (tmp_path / "out").is_dir(), "output directory was not created"


def test_load_json_matches_toml(tmp_path, dataset):
    raw = {"dataset": dataset, "split": {"ratio": 0.9, "seed": 4},
           "algorithms": [{"name": "SLD", "macro_steps": [1, 2, 3]}], "L": 20}
    fn = tmp_path / "experiment.json"
    fn.write_text(json.dumps(raw))
    cfg = config.load_config(str(fn))
    assert cfg.lengths == (20,)
    assert cfg.config_hash() == config.config_from_dict(raw).config_hash()


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        config.load_config(str(tmp_path / "missing.toml"))
    fn = tmp_path / "broken.toml"
    fn.write_text("dataset = \n")
    with pytest.raises(ConfigError):
        config.load_config(str(fn))
    fn = tmp_path / "experiment.yaml"
    fn.write_text("dataset: x\n")
    with pytest.raises(ConfigError):
        config.load_config(str(fn))
    with pytest.raises(ConfigError):
        config.config_from_dict({"dataset": "x", "algorithm": []})
    with pytest.raises(ConfigError):
        config.config_from_dict({"dataset": "x", "algorithms": [{"name": "PAGERANK"}]})
    with pytest.raises(ConfigError):
        config.config_from_dict({"dataset": "x", "algorithms": [{"name": "SLD", "steps": [1]}]})
    with pytest.raises(ConfigError):
        config.config_from_dict({"dataset": "x", "quiet": True})


def test_default_grids():
    assert len(AlgorithmSpec("HYBRID").grid()) == 11
    assert len(AlgorithmSpec("MD").grid()) == 1
    assert [p.macro_steps for p in AlgorithmSpec("SLD").grid()] == list(range(1, 11))
    usld = AlgorithmSpec("USLD").grid()
    assert len(usld) == 41
    assert {p.macro_steps for p in usld} == {3}
    assert usld[0].theta == -2.0 and usld[-1].theta == 2.0
    assert 0.0 in [p.theta for p in AlgorithmSpec("RENBI").grid()]
    with pytest.raises(ConfigError):
        AlgorithmSpec("SLD", macro_steps=[])
    with pytest.raises(ConfigError):
        AlgorithmSpec("HYBRID", lambdas=[0.5, 1.5]).grid()


def test_validate(tmp_path, dataset):
    base = ExperimentConfig(dataset=dataset, algorithms=(AlgorithmSpec("MD"),),
                            output=str(tmp_path / "out"), workers=1)
    base.validate()
    for bad in (dict(ratio=1.0), dict(ratio=0.0), dict(lengths=(0,)), dict(lengths=()),
                dict(metrics=("precision",)), dict(workers=0), dict(algorithms=()),
                dict(log_base="3"), dict(coverage_denominator="users")):
        with pytest.raises(ConfigError):
            replace(base, **bad).validate()
    with pytest.raises(DataError):
        replace(base, dataset=str(tmp_path / "missing.tsv")).validate()


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv(config.WORKERS_ENV, "3")
    assert config.default_workers() == 3
    assert ExperimentConfig(dataset="x", algorithms=()).workers == 3
    monkeypatch.setenv(config.WORKERS_ENV, "many")
    with pytest.raises(ConfigError):
        config.default_workers()
    monkeypatch.delenv(config.WORKERS_ENV)
    assert config.default_workers() == 1


def test_config_hash():
    cfg = config.config_from_dict({"dataset": "x", "algorithms": [{"name": "MD"}]})
    assert cfg.config_hash() == replace(cfg, workers=8, quiet=True).config_hash(), \
        "runtime-only fields must not change the hash"
    assert cfg.config_hash() != replace(cfg, seed=2).config_hash()
    assert "workers" not in cfg.as_dict()


def test_config_from_args(tmp_path, dataset):
    fn = tmp_path / "experiment.toml"
    fn.write_text(TOML_CONFIG.format(dataset="elsewhere.tsv", output=tmp_path / "out"))
    parser = pipeline.init_pipeline_parser()

    args = parser.parse_args(["run", dataset, "--config", str(fn), "--seed", "9", "--L", "5",
                              "--workers", "2", "--all-users", "-q"])
    cfg = config.config_from_args(args)
    assert cfg.dataset == dataset, "positional dataset must override the config file"
    assert cfg.seed == 9 and cfg.ratio == 0.9
    assert cfg.lengths == (5,)
    assert cfg.workers == 2
    assert cfg.all_users and cfg.quiet
    assert len(cfg.algorithms) == 2

    args = parser.parse_args(["run", dataset, "--algorithm", "renbi", "--thetas", "-1", "1",
                              "--metrics", "rs"])
    cfg = config.config_from_args(args)
    assert [p.label() for p in cfg.grid_points()] == ["RENBI_thetam1", "RENBI_theta1"]
    assert cfg.metrics == ("rs",)
    assert cfg.ratio == 0.8 and cfg.seed == 1
