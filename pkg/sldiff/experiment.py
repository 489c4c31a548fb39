"""Experiment orchestration: split, score users over a worker pool, evaluate, write reports."""

import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import pandas as pd
from clint.textui import colored
from tqdm import tqdm

from . import version
from .config import METRICS
from .diffusion import coverage, diffusion_series, score_user, scores_from_series
from .errors import ConfigError
from .graph import build_graph, read_edges, split_train_probe, write_index
from .metrics import LINK_COLUMNS, ProbeEvaluation, degree_binned, probe_rows
from .ranking import rank_user
from .report import MetricReport, metric_reports

# users per task handed to a worker; fixed so results never depend on the worker count
CHUNK_SIZE = 64
TOP_COLUMNS = ["user", "item", "score", "rank"]


def say(message, quiet=False, colour=colored.green, prefix="Running: "):
    if not quiet:
        print(colour(prefix) + message, file=sys.stderr)


def warn(message, quiet=False):
    say(message, quiet, colored.yellow, "Warning: ")


def chunked(users, size=CHUNK_SIZE):
    users = np.asarray(users, dtype=np.int64)
    return [users[i:i + size] for i in range(0, len(users), size)]


# per-process task, installed by the pool initializer
_TASK = None


def _install(task):
    global _TASK
    _TASK = task


def _run_chunk(users):
    return _TASK(users)


def map_users(task, users, workers=1, quiet=False, desc="users"):
    """Apply ``task`` to fixed-size chunks of ``users``, in order.

    With more than one worker the chunks are spread over a process pool; the
    graph travels to each process once through the pool initializer.
    """
    chunks = chunked(users)
    progress = dict(total=len(chunks), desc=desc, unit="chunk", disable=quiet, file=sys.stderr)
    if workers <= 1 or len(chunks) <= 1:
        return [task(chunk) for chunk in tqdm(chunks, **progress)]
    with ProcessPoolExecutor(max_workers=workers, initializer=_install, initargs=(task,)) as pool:
        return list(tqdm(pool.map(_run_chunk, chunks), **progress))


def top_rows(ranked, L):
    """The first ``L`` entries of a ranked list as user, item, score, rank rows."""
    entries = ranked.top(L)
    return pd.DataFrame({
        "user": np.full(len(entries), ranked.user, dtype=np.int64),
        "item": entries,
        "score": ranked.scores[:len(entries)],
        "rank": np.arange(1, len(entries) + 1, dtype=np.int64),
    })


def _concat(frames, columns):
    frames = [f for f in frames if len(f.index)]
    if not frames:
        return pd.DataFrame(columns=columns)
    return pd.concat(frames, ignore_index=True)


@dataclass
class ProbeTask:
    """Score a chunk of users at every grid point and locate their probe items.

    ``probe_items`` maps a user to the array of their evaluable probe items;
    when ``top_length`` is set the top lists are returned as well.
    """
    graph: object
    probe_items: dict
    grid: list
    top_length: int = None

    def __call__(self, users):
        series_length = max(p.series_length for p in self.grid)
        links = [[] for _ in self.grid]
        tops = [[] for _ in self.grid]
        for user in users:
            items = self.probe_items.get(int(user))
            if items is None and not self.top_length:
                continue
            # the lambda=1 series is shared by every MD/SLD/U-SLD/O-SLD/RENBI point
            series = diffusion_series(self.graph, user, series_length) if series_length else []
            for g, params in enumerate(self.grid):
                ranked = rank_user(self.graph, user, scores_from_series(self.graph, user, params, series))
                if items is not None:
                    links[g].append(probe_rows(ranked, items))
                if self.top_length:
                    tops[g].append(top_rows(ranked, self.top_length))
        return ([_concat(f, LINK_COLUMNS) for f in links],
                [_concat(f, TOP_COLUMNS) for f in tops] if self.top_length else None)


@dataclass
class CoverageTask:
    graph: object
    steps: int = 3
    denominator: str = "all"

    def __call__(self, users):
        return pd.DataFrame({
            "user": users,
            "degree": self.graph.user_degree[users],
            "coverage": [coverage(self.graph, u, self.steps, self.denominator) for u in users],
        })


@dataclass
class TopListTask:
    graph: object
    params: object
    length: int

    def __call__(self, users):
        return _concat([top_rows(rank_user(self.graph, u, score_user(self.graph, u, self.params)), self.length)
                        for u in users], TOP_COLUMNS)


def load_split(config):
    """Read the dataset, split it and build the training graph."""
    edges = read_edges(config.dataset, rating_threshold=config.rating_threshold)
    if edges.duplicates:
        warn("dropped %d repeated interactions" % edges.duplicates, config.quiet)
    split = split_train_probe(edges, config.ratio, config.seed)
    return edges, split, build_graph(split.training)


def evaluable_probe(graph, probe):
    """Split the probe links into evaluable ones (warm user and item) and a skipped count.

    Returns
    -------
    dict of int -> numpy.ndarray
        Sorted probe items per user
    int
        Number of skipped (cold) links
    """
    warm = (graph.user_degree[probe.users] > 0) & (graph.item_degree[probe.items] > 0)
    frame = pd.DataFrame({"user": probe.users[warm], "item": probe.items[warm]})
    by_user = {int(user): np.sort(group["item"].to_numpy())
               for user, group in frame.groupby("user", sort=True)}
    return by_user, int((~warm).sum())


def write_top_lists(frame, graph, fn):
    """Write top lists as ``user<TAB>item<TAB>score<TAB>rank`` with external ids."""
    out = pd.DataFrame({
        "user": graph.user_ids[frame["user"].to_numpy(dtype=np.int64)],
        "item": graph.item_ids[frame["item"].to_numpy(dtype=np.int64)],
        "score": frame["score"].to_numpy(dtype=np.float64),
        "rank": frame["rank"].to_numpy(dtype=np.int64),
    })
    out.to_csv(fn, sep='\t', header=False, index=False, float_format="%.12g", lineterminator="\n")


def run_experiment(config):
    """Evaluate every grid point of ``config`` and write its reports.

    Writes one CSV and one JSON report per (grid point, metric, L) into
    ``config.output``, the id maps, a ``manifest.json`` and ``run.log.txt``.
    The CSV and manifest contents depend only on the dataset and config.

    Returns
    -------
    list of MetricReport
    """
    config.validate()
    grid = config.grid_points()
    start = time.perf_counter()

    say("reading %s" % config.dataset, config.quiet)
    edges, split, graph = load_split(config)
    probe_items, skipped = evaluable_probe(graph, split.probe)
    if skipped:
        warn("%d probe links have a cold user or item and are skipped" % skipped, config.quiet)

    if config.all_users:
        users = np.flatnonzero(graph.user_degree > 0)
    else:
        users = np.array(sorted(probe_items), dtype=np.int64)
    top_length = max(config.lengths) if config.all_users else None

    say("scoring %d users at %d grid points with %d worker(s)" % (len(users), len(grid), config.workers),
        config.quiet)
    task = ProbeTask(graph, probe_items, grid, top_length)
    results = map_users(task, users, config.workers, config.quiet)
    scored = time.perf_counter()

    logfh = open(os.path.join(config.output, "run.log.txt"), "w")
    print("scoring\t%d users\t%d grid points\t%.3f" % (len(users), len(grid), scored - start), file=logfh)

    reports = []
    for g, params in enumerate(grid):
        timer = time.perf_counter()
        evaluation = ProbeEvaluation.concat(
            [ProbeEvaluation(links[g]) for links, _ in results] + [ProbeEvaluation(pd.DataFrame(columns=LINK_COLUMNS), skipped)])
        point_reports = metric_reports(evaluation, graph, params, config.metrics, config.lengths,
                                       config.bin_scale, config.hits_subsets)
        for report in point_reports:
            report.write(config.output)
        if top_length:
            write_top_lists(_concat([tops[g] for _, tops in results], TOP_COLUMNS), graph,
                            os.path.join(config.output, "%s.top%d.tsv" % (params.label(), top_length)))
        reports.extend(point_reports)
        print("%s\t%s\t%.3f" % (params.label(), ",".join(r.name for r in point_reports),
                                time.perf_counter() - timer), file=logfh)
    logfh.close()

    write_index(graph.user_ids, os.path.join(config.output, "users.tsv"))
    write_index(graph.item_ids, os.path.join(config.output, "items.tsv"))
    manifest = {
        "version": version.__version__,
        "config": config.as_dict(),
        "config_hash": config.config_hash(),
        "seed": config.seed,
        "ratio": config.ratio,
        "counts": dict(split.counts, duplicates=edges.duplicates, filtered=edges.filtered),
        "skipped_links": skipped,
        "scored_users": len(users),
        "reports": [r.name for r in reports],
    }
    with open(os.path.join(config.output, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=4, sort_keys=True)
    say("wrote %d reports to %s" % (len(reports), config.output), config.quiet)
    return reports


@dataclass(frozen=True)
class Optimum:
    algorithm: str
    label: str
    params: dict
    metric: str
    L: int
    value: float


def _tie_key(params):
    # smaller parameter values win ties
    return tuple(0.0 if params.get(k) is None else params[k] for k in ("theta", "macro_steps", "lambda"))


def sweep_optimal(config, metric, reports=None, L=None):
    """Pick the best grid point per algorithm: lowest <RS>, highest recall or hits.

    Parameters
    ----------
    config : ExperimentConfig
        Every algorithm must have at least two grid points
    metric : str
        ``rs``, ``recall`` or ``hits``
    reports : list of MetricReport, optional
        Reuse reports of an earlier run_experiment(config)
    L : int, optional
        List length for recall/hits, defaults to the first configured L

    Returns
    -------
    dict of str -> Optimum
        Keyed by algorithm name, in config order
    """
    if metric not in METRICS:
        raise ConfigError("unknown metric %r" % (metric,))
    for spec in config.algorithms:
        if len(spec.grid()) < 2:
            raise ConfigError("sweeping %s needs at least two grid points" % spec.name.value)
    if metric not in config.metrics:
        raise ConfigError("metric %s is not computed by this configuration" % metric)
    if metric != "rs":
        L = config.lengths[0] if L is None else L
        if L not in config.lengths:
            raise ConfigError("L=%s is not computed by this configuration" % L)
    else:
        L = None
    if reports is None:
        reports = run_experiment(config)

    sign = 1.0 if metric == "rs" else -1.0
    optima = {}
    for spec in config.algorithms:
        candidates = [r for r in reports
                      if r.algorithm == spec.name.value and r.metric == metric and r.L == L
                      and r.overall is not None]
        if not candidates:
            continue
        best = min(candidates, key=lambda r: (sign * r.overall, _tie_key(r.params)))
        optima[spec.name.value] = Optimum(best.algorithm, best.label, best.params, metric, L, best.overall)
    return optima


def write_optima(optima, directory, metric, L=None):
    """Write the sweep result as ``optimal.<metric>[.L<n>].csv``."""
    name = "optimal.%s" % metric + (".L%d" % L if L is not None else "")
    rows = [{"algorithm": o.algorithm, "label": o.label, "lambda": o.params.get("lambda"),
             "macro_steps": o.params.get("macro_steps"), "theta": o.params.get("theta"),
             "metric": o.metric, "L": o.L, "value": o.value} for o in optima.values()]
    fn = os.path.join(directory, name + ".csv")
    pd.DataFrame(rows, columns=["algorithm", "label", "lambda", "macro_steps", "theta", "metric", "L", "value"]) \
        .to_csv(fn, index=False, float_format="%.12g", lineterminator="\n")
    return fn


def coverage_table(graph, steps=3, denominator="all", workers=1, quiet=False):
    """Per-user coverage c_u for every user with at least one edge.

    Returns
    -------
    pandas.DataFrame
        Columns user, degree, coverage
    """
    if steps < 1 or steps % 2 == 0:
        raise ConfigError("coverage steps must be odd and positive (got %s)" % steps)
    if denominator not in ("all", "uncollected"):
        raise ConfigError("unknown coverage denominator %r" % (denominator,))
    users = np.flatnonzero(graph.user_degree > 0)
    frames = map_users(CoverageTask(graph, steps, denominator), users, workers, quiet, desc="coverage")
    return _concat(frames, ["user", "degree", "coverage"])


def coverage_report(table, a, steps=3, denominator="all"):
    """Summarise a coverage table: dataset mean and degree-binned means."""
    bins = degree_binned(table["coverage"].to_numpy(), table["degree"].to_numpy(), a)
    bins.insert(0, "axis", "user")
    return MetricReport("coverage", algorithm="MD", label="coverage_t%d" % steps,
                        params={"steps": steps, "denominator": denominator},
                        overall=float(table["coverage"].mean()) if len(table.index) else None,
                        evaluated=len(table.index), bins=bins)


def top_lists(graph, params, L, users=None, workers=1, quiet=False):
    """Top-L recommendation lists for ``users`` (default: every user with an edge)."""
    if users is None:
        users = np.flatnonzero(graph.user_degree > 0)
    frames = map_users(TopListTask(graph, params, L), users, workers, quiet, desc="top-L")
    return _concat(frames, TOP_COLUMNS)
