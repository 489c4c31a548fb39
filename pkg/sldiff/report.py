"""MetricReport: plot-ready metric output, overall and degree-binned, as CSV and JSON.

CSV schema (one row per bin, header included):

    metric, algorithm, label, lambda, macro_steps, theta, L, overall, skipped,
    axis, x, low, high, mean, count

JSON schema: the report's fields, with ``bins`` as a list of row objects and
``subsets`` mapping a degree-subset name to its value (null when undefined).
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .metrics import Axis, degree_binned

BIN_COLUMNS = ["axis", "x", "low", "high", "mean", "count"]
FLOAT_FORMAT = "%.12g"


@dataclass(eq=False)
class MetricReport:
    metric: str
    algorithm: str
    label: str
    params: dict
    L: int = None
    overall: float = None
    skipped: int = 0
    evaluated: int = 0
    bins: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=BIN_COLUMNS))
    subsets: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def name(self):
        """File stem embedding algorithm, parameters, metric and L."""
        name = "%s.%s" % (self.label, self.metric)
        if self.L is not None:
            name += ".L%d" % self.L
        return name

    def as_dict(self):
        return {
            "metric": self.metric,
            "algorithm": self.algorithm,
            "label": self.label,
            "params": dict(self.params),
            "L": self.L,
            "overall": self.overall,
            "skipped": self.skipped,
            "evaluated": self.evaluated,
            "subsets": dict(self.subsets),
            "notes": list(self.notes),
            "bins": [
                {k: _plain(v) for k, v in row.items()}
                for row in self.bins[BIN_COLUMNS].to_dict(orient="records")
            ],
        }

    def to_frame(self):
        frame = self.bins[BIN_COLUMNS].copy()
        header = {
            "metric": self.metric, "algorithm": self.algorithm, "label": self.label,
            "lambda": self.params.get("lambda"), "macro_steps": self.params.get("macro_steps"),
            "theta": self.params.get("theta"), "L": self.L, "overall": self.overall,
            "skipped": self.skipped,
        }
        for position, (column, value) in enumerate(header.items()):
            frame.insert(position, column, [value] * len(frame.index))
        return frame

    def write(self, directory):
        """Write ``<name>.csv`` and ``<name>.json`` into ``directory``."""
        csv_fn = os.path.join(directory, self.name + ".csv")
        json_fn = os.path.join(directory, self.name + ".json")
        self.to_frame().to_csv(csv_fn, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        with open(json_fn, "w") as fh:
            json.dump(self.as_dict(), fh, indent=4, sort_keys=True)
        return csv_fn, json_fn


def _plain(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def _axis_bins(values, degrees, axis, a):
    bins = degree_binned(values, degrees, a)
    bins.insert(0, "axis", axis.value)
    return bins


def binned_by_link(values, links, graph, a):
    """Bin per-link ``values`` by the degree of each link's user and item."""
    return pd.concat([
        _axis_bins(values, graph.user_degree[links["user"].to_numpy()], Axis.USER, a),
        _axis_bins(values, graph.item_degree[links["item"].to_numpy()], Axis.ITEM, a),
    ], ignore_index=True)


def metric_reports(evaluation, graph, params, metrics, lengths, a, hits_subsets=()):
    """Build the requested reports for one grid point.

    Parameters
    ----------
    evaluation : ProbeEvaluation
        Probe link positions for the grid point
    graph : BipartiteGraph
        The training graph (degrees for binning and subsets)
    params : DiffusionParams
    metrics : list of str
        Any of ``rs``, ``recall``, ``hits``
    lengths : list of int
        The L values for recall and hits
    a : float
        Degree bin scale
    hits_subsets : list of DegreeSubset

    Returns
    -------
    list of MetricReport
    """
    reports = []
    common = dict(algorithm=params.algorithm.value, label=params.label(), params=params.as_dict(),
                  skipped=evaluation.skipped, evaluated=len(evaluation))

    if "rs" in metrics:
        result = evaluation.ranking_score()
        reports.append(MetricReport(
            "rs", overall=result.value,
            bins=binned_by_link(result.values["rs"].to_numpy(), evaluation.links, graph, a),
            notes=["ties among equal scores use average (mid) ranks"], **common))

    for L in lengths:
        if "recall" in metrics:
            result = evaluation.recall(L)
            values = result.values
            reports.append(MetricReport(
                "recall", L=L, overall=result.value,
                bins=_axis_bins(values["recall"].to_numpy(),
                                graph.user_degree[values["user"].to_numpy()], Axis.USER, a),
                notes=["averaged over %d users with at least one evaluable probe link, not all %d users"
                       % (len(values.index), graph.num_users)],
                **common))
        if "hits" in metrics:
            hit = evaluation.hit_mask(L).astype(np.float64)
            subsets = {}
            for subset in hits_subsets:
                nodes = subset.nodes(graph)
                subsets[subset.name] = evaluation.hits(L, nodes, subset.axis) if len(nodes) else None
            reports.append(MetricReport(
                "hits", L=L, overall=float(hit.mean()) if len(hit) else None,
                bins=binned_by_link(hit, evaluation.links, graph, a),
                subsets=subsets, **common))
    return reports
