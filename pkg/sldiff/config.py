"""Experiment configuration: TOML/JSON files, defaults and command line overrides."""

import hashlib
import json
import math
import os
import tomllib
from dataclasses import dataclass, field, replace

from .diffusion import Algorithm, DiffusionParams
from .errors import ConfigError, DataError
from .metrics import DegreeSubset, bin_scale

# default worker count for run/sweep/coverage/export-topl
WORKERS_ENV = "SLDIFF_WORKERS"

METRICS = ("rs", "recall", "hits")
LOG_BASES = {"e": math.e, "10": 10.0, "2": 2.0}
COVERAGE_DENOMINATORS = ("all", "uncollected")


def _steps(start, stop, step):
    count = int(round((stop - start) / step))
    return [round(start + i * step, 10) for i in range(count + 1)]


DEFAULT_LAMBDAS = _steps(0.0, 1.0, 0.1)
DEFAULT_THETAS = _steps(-2.0, 2.0, 0.1)
DEFAULT_MACRO_STEPS = list(range(1, 11))
# U-SLD and O-SLD balance ranking score and recall at three macro-steps
DEFAULT_PERSONALISED_STEPS = [3]
DEFAULT_HITS_SUBSETS = (DegreeSubset("user", max_degree=5), DegreeSubset("user", min_degree=20))


def default_workers():
    value = os.environ.get(WORKERS_ENV)
    if not value:
        return 1
    try:
        return int(value)
    except ValueError:
        raise ConfigError("%s must be an integer (got %r)" % (WORKERS_ENV, value))


@dataclass(frozen=True)
class AlgorithmSpec:
    """An algorithm and its parameter grid; omitted grids take the defaults."""
    name: Algorithm
    lambdas: tuple = None
    macro_steps: tuple = None
    thetas: tuple = None

    def __post_init__(self):
        if not isinstance(self.name, Algorithm):
            try:
                object.__setattr__(self, "name", Algorithm(str(self.name).upper()))
            except ValueError:
                raise ConfigError("unknown algorithm %r" % (self.name,))
        for grid in ("lambdas", "macro_steps", "thetas"):
            values = getattr(self, grid)
            if values is not None:
                if isinstance(values, (int, float)):
                    values = [values]
                if len(values) == 0:
                    raise ConfigError("%s grid of %s is empty" % (grid, self.name.value))
                object.__setattr__(self, grid, tuple(values))

    def grid(self):
        """Every DiffusionParams point of the grid, in a fixed order."""
        name = self.name
        if name is Algorithm.HYBRID:
            return [DiffusionParams(name, lam=lam) for lam in self.lambdas or DEFAULT_LAMBDAS]
        if name in (Algorithm.MD, Algorithm.HC):
            return [DiffusionParams(name)]
        if name is Algorithm.SLD:
            return [DiffusionParams(name, macro_steps=n) for n in self.macro_steps or DEFAULT_MACRO_STEPS]
        if name is Algorithm.RENBI:
            return [DiffusionParams(name, theta=theta) for theta in self.thetas or DEFAULT_THETAS]
        return [DiffusionParams(name, macro_steps=n, theta=theta)
                for n in self.macro_steps or DEFAULT_PERSONALISED_STEPS
                for theta in self.thetas or DEFAULT_THETAS]

    def as_dict(self):
        spec = {"name": self.name.value}
        for grid in ("lambdas", "macro_steps", "thetas"):
            if getattr(self, grid) is not None:
                spec[grid] = list(getattr(self, grid))
        return spec


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str
    algorithms: tuple
    output: str = "results"
    ratio: float = 0.8
    seed: int = 1
    lengths: tuple = (20,)
    metrics: tuple = METRICS
    workers: int = field(default_factory=default_workers)
    all_users: bool = False
    rating_threshold: float = None
    coverage_denominator: str = "all"
    log_base: str = "e"
    hits_subsets: tuple = DEFAULT_HITS_SUBSETS
    quiet: bool = False

    @property
    def bin_scale(self):
        return bin_scale(LOG_BASES[self.log_base])

    def grid_points(self):
        points = []
        for spec in self.algorithms:
            points.extend(spec.grid())
        return points

    def validate(self, check_paths=True):
        """Reject the configuration before any scoring starts.

        Raises
        ------
        ConfigError
            Invalid grids, metrics, lengths, ratio, workers or output directory
        DataError
            The dataset file does not exist
        """
        if not self.algorithms:
            raise ConfigError("no algorithms configured")
        if not 0 < self.ratio < 1:
            raise ConfigError("split ratio must lie strictly between 0 and 1 (got %s)" % self.ratio)
        if not self.metrics:
            raise ConfigError("no metrics configured")
        unknown = set(self.metrics) - set(METRICS)
        if unknown:
            raise ConfigError("unknown metrics: %s" % ", ".join(sorted(unknown)))
        if not self.lengths:
            raise ConfigError("no list lengths (L) configured")
        for L in self.lengths:
            if int(L) != L or L < 1:
                raise ConfigError("list length L must be a positive integer (got %s)" % L)
        if int(self.workers) != self.workers or self.workers < 1:
            raise ConfigError("workers must be a positive integer (got %s)" % self.workers)
        if self.coverage_denominator not in COVERAGE_DENOMINATORS:
            raise ConfigError("coverage_denominator must be one of %s" % ", ".join(COVERAGE_DENOMINATORS))
        if self.log_base not in LOG_BASES:
            raise ConfigError("log_base must be one of %s" % ", ".join(LOG_BASES))
        self.grid_points()

        if check_paths:
            if not os.path.isfile(self.dataset):
                raise DataError("dataset file doesn't exist (%s)" % self.dataset)
            try:
                os.makedirs(self.output, exist_ok=True)
            except OSError as e:
                raise ConfigError("cannot create output directory %s: %s" % (self.output, e))
            if not os.access(self.output, os.W_OK):
                raise ConfigError("output directory is not writable (%s)" % self.output)
        return self

    def as_dict(self):
        """The resolved configuration; runtime-only fields (workers, quiet) are left out."""
        return {
            "dataset": self.dataset,
            "output": self.output,
            "split": {"ratio": self.ratio, "seed": self.seed},
            "algorithms": [spec.as_dict() for spec in self.algorithms],
            "L": list(self.lengths),
            "metrics": list(self.metrics),
            "all_users": self.all_users,
            "rating_threshold": self.rating_threshold,
            "coverage_denominator": self.coverage_denominator,
            "log_base": self.log_base,
            "hits_subsets": [
                {"axis": s.axis.value, "min_degree": s.min_degree, "max_degree": s.max_degree}
                for s in self.hits_subsets
            ],
        }

    def config_hash(self):
        canonical = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


_KEYS = {"dataset", "output", "split", "algorithms", "L", "metrics", "workers", "all_users",
         "rating_threshold", "coverage_denominator", "log_base", "hits_subsets"}


def config_from_dict(raw):
    """Build an ExperimentConfig from a parsed TOML/JSON document."""
    unknown = set(raw) - _KEYS
    if unknown:
        raise ConfigError("unknown configuration keys: %s" % ", ".join(sorted(unknown)))
    try:
        algorithms = tuple(AlgorithmSpec(**spec) for spec in raw.get("algorithms", []))
        subsets = raw.get("hits_subsets")
        kwargs = {
            "dataset": raw.get("dataset", ""),
            "algorithms": algorithms,
            "ratio": raw.get("split", {}).get("ratio", 0.8),
            "seed": raw.get("split", {}).get("seed", 1),
        }
        for key, attr in (("output", "output"), ("L", "lengths"), ("metrics", "metrics"),
                          ("workers", "workers"), ("all_users", "all_users"),
                          ("rating_threshold", "rating_threshold"),
                          ("coverage_denominator", "coverage_denominator"), ("log_base", "log_base")):
            if key in raw:
                kwargs[attr] = raw[key]
        if isinstance(kwargs.get("lengths"), int):
            kwargs["lengths"] = [kwargs["lengths"]]
        for key in ("lengths", "metrics"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        if subsets is not None:
            kwargs["hits_subsets"] = tuple(DegreeSubset(**s) for s in subsets)
        return ExperimentConfig(**kwargs)
    except (TypeError, AttributeError, ValueError) as e:
        raise ConfigError("invalid configuration: %s" % e)


def load_config(fn):
    """Read a TOML (``.toml``) or JSON (``.json``) experiment configuration."""
    if not os.path.isfile(fn):
        raise ConfigError("config file doesn't exist (%s)" % fn)
    try:
        if fn.endswith(".toml"):
            with open(fn, "rb") as fh:
                raw = tomllib.load(fh)
        elif fn.endswith(".json"):
            with open(fn) as fh:
                raw = json.load(fh)
        else:
            raise ConfigError("config file must end in .toml or .json (%s)" % fn)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ConfigError("could not parse %s: %s" % (fn, e))
    return config_from_dict(raw)


def apply_overrides(config, args):
    """Return ``config`` with every command line flag that was given applied."""
    overrides = {}
    for flag, attr in (("dataset", "dataset"), ("output", "output"), ("seed", "seed"),
                       ("ratio", "ratio"), ("workers", "workers"), ("L", "lengths"),
                       ("metrics", "metrics"), ("rating_threshold", "rating_threshold")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[attr] = tuple(value) if isinstance(value, list) else value
    if getattr(args, "all_users", False):
        overrides["all_users"] = True
    if getattr(args, "quiet", False):
        overrides["quiet"] = True
    return replace(config, **overrides)


def algorithm_from_args(args):
    """An AlgorithmSpec from ``--algorithm`` and its grid flags, or None."""
    if not getattr(args, "algorithm", None):
        return None
    return AlgorithmSpec(args.algorithm, lambdas=args.lambdas, macro_steps=args.macro_steps,
                         thetas=args.thetas)


def config_from_args(args):
    """Resolve the experiment configuration of a ``run``/``sweep`` invocation.

    The config file (if any) is read first; ``--algorithm`` replaces its
    algorithm list and the remaining flags override single fields.
    """
    if args.config:
        config = load_config(args.config)
    else:
        config = config_from_dict({"dataset": args.dataset or ""})
    spec = algorithm_from_args(args)
    if spec is not None:
        config = replace(config, algorithms=(spec,))
    return apply_overrides(config, args)
