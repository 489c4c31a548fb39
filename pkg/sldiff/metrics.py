"""Accuracy metrics over the probe set: ranking score, recall, hits and degree bins."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import pandas as pd

from .errors import ConfigError

LINK_COLUMNS = ["user", "item", "rank", "position", "list_size"]


class Axis(str, Enum):
    USER = "user"
    ITEM = "item"


@dataclass(frozen=True, eq=False)
class MetricResult:
    """An overall metric value with the per-link or per-user values behind it.

    ``value`` is None when no probe link could be evaluated.
    """
    name: str
    value: float
    values: pd.DataFrame
    skipped: int = 0


def probe_rows(ranked_list, items):
    """Rank, ordinal position and list size of ``items`` in ``ranked_list``.

    Items the user already collected are dropped.
    """
    items = np.asarray(items, dtype=np.int64)
    positions = ranked_list.positions[items]
    listed = positions > 0
    items, positions = items[listed], positions[listed]
    return pd.DataFrame({
        "user": np.full(len(items), ranked_list.user, dtype=np.int64),
        "item": items,
        "rank": ranked_list.ranks[positions - 1],
        "position": positions,
        "list_size": np.full(len(items), ranked_list.list_size, dtype=np.int64),
    })


@dataclass(frozen=True, eq=False)
class ProbeEvaluation:
    """Where each evaluable probe link landed in its user's ranked list.

    ``links`` has one row per link (see LINK_COLUMNS) sorted by user and item;
    ``skipped`` counts probe links that could not be scored (cold user or item).
    """
    links: pd.DataFrame
    skipped: int = 0

    @classmethod
    def from_ranked_lists(cls, ranked_lists, probe, graph=None):
        """Look up every probe link in ``ranked_lists`` (a mapping user -> RankedList).

        Links whose user has no list, or whose user or item has zero degree in
        ``graph`` (when given), are skipped.
        """
        frame = pd.DataFrame({"user": probe.users, "item": probe.items})
        cold = np.zeros(len(frame.index), dtype=bool)
        if graph is not None:
            cold = (graph.user_degree[probe.users] == 0) | (graph.item_degree[probe.items] == 0)
        cold |= ~frame["user"].isin(list(ranked_lists.keys())).to_numpy()

        parts = [probe_rows(ranked_lists[user], group["item"].to_numpy())
                 for user, group in frame[~cold].groupby("user", sort=True)]
        links = pd.concat(parts, ignore_index=True) if parts else pd.DataFrame(columns=LINK_COLUMNS)
        return cls.concat([cls(links, skipped=len(frame.index) - len(links.index))])

    @classmethod
    def concat(cls, evaluations):
        """Merge partial evaluations; the result does not depend on their order."""
        evaluations = list(evaluations)
        frames = [e.links for e in evaluations if len(e.links.index)]
        if frames:
            links = pd.concat(frames, ignore_index=True)
        else:
            links = pd.DataFrame(columns=LINK_COLUMNS)
        links = links.astype({"user": np.int64, "item": np.int64, "rank": np.float64,
                              "position": np.int64, "list_size": np.int64})
        links = links.sort_values(["user", "item"], kind="mergesort").reset_index(drop=True)
        return cls(links, skipped=sum(e.skipped for e in evaluations))

    def __len__(self):
        return len(self.links.index)

    def ranking_score(self):
        values = self.links[["user", "item"]].copy()
        values["rs"] = self.links["rank"] / self.links["list_size"]
        value = float(values["rs"].mean()) if len(values.index) else None
        return MetricResult("rs", value, values, skipped=self.skipped)

    def hit_mask(self, L):
        _check_length(L)
        return (self.links["position"] <= L).to_numpy()

    def recall(self, L):
        hit = self.hit_mask(L)
        per_user = pd.DataFrame({"user": self.links["user"], "hits": hit.astype(np.int64)})
        per_user = per_user.groupby("user", sort=True).agg(
            hits=("hits", "sum"), probe=("hits", "size")).reset_index()
        per_user["recall"] = per_user["hits"] / per_user["probe"]
        value = float(per_user["recall"].mean()) if len(per_user.index) else None
        return MetricResult("recall", value, per_user, skipped=self.skipped)

    def hits(self, L, node_subset, axis=Axis.USER):
        axis = Axis(axis)
        node_subset = np.asarray(list(node_subset), dtype=np.int64)
        if len(node_subset) == 0:
            raise ConfigError("hits needs a non-empty node subset")
        restricted = self.links[axis.value].isin(node_subset).to_numpy()
        if not restricted.any():
            return None
        return float(self.hit_mask(L)[restricted].mean())


def _check_length(L):
    if int(L) != L or L < 1:
        raise ConfigError("list length L must be a positive integer (got %s)" % L)


def _evaluation(ranked_lists, probe, graph):
    if isinstance(ranked_lists, ProbeEvaluation):
        return ranked_lists
    return ProbeEvaluation.from_ranked_lists(ranked_lists, probe, graph)


def ranking_score(ranked_lists, probe, graph=None):
    """Mean relative rank <RS> of the probe links, with per-link RS values.

    Parameters
    ----------
    ranked_lists : dict of int -> RankedList, or ProbeEvaluation
        MIDRANK lists covering every uncollected item of each probe user
    probe : EdgeSet
        The probe links
    graph : BipartiteGraph, optional
        The training graph; links with a zero-degree user or item are skipped

    Returns
    -------
    MetricResult
        ``values`` has columns user, item, rs
    """
    return _evaluation(ranked_lists, probe, graph).ranking_score()


def recall(ranked_lists, probe, L, graph=None):
    """Recall@L averaged over users with at least one evaluable probe link.

    Returns
    -------
    MetricResult
        ``values`` has columns user, hits (d_i), probe (N_i), recall
    """
    return _evaluation(ranked_lists, probe, graph).recall(L)


def hits(ranked_lists, probe, L, node_subset, axis=Axis.USER, graph=None):
    """Hits@L: share of the probe links touching ``node_subset`` on ``axis``
    whose item is in the owner's top-L. None when no link touches the subset."""
    return _evaluation(ranked_lists, probe, graph).hits(L, node_subset, axis)


def bin_scale(log_base=math.e):
    """The bin width parameter a = log(5) / 2 in the given log base."""
    if log_base == math.e:
        return 0.5 * math.log(5)
    return 0.5 * math.log(5, log_base)


def degree_bins(max_degree, a=None):
    """Degree intervals [a(x^2 - x), a(x^2 + 2)] for x = 1, 2, ... up to max_degree.

    Returns
    -------
    list of (int, float, float)
        (x, low, high) triples; consecutive intervals overlap
    """
    if a is None:
        a = bin_scale()
    bins = []
    x = 1
    while a * (x * x - x) <= max_degree:
        bins.append((x, a * (x * x - x), a * (x * x + 2)))
        x += 1
    return bins


def degree_binned(values, degrees, a=None):
    """Average ``values`` over every degree interval of degree_bins.

    A node (or link) whose degree falls in several overlapping intervals
    counts towards each of them; empty intervals are omitted.

    Parameters
    ----------
    values : array-like of float
        One metric value per node or link
    degrees : array-like of int
        The matching degrees
    a : float, optional
        Bin scale, defaults to bin_scale()

    Returns
    -------
    pandas.DataFrame
        Columns x, low, high, mean, count
    """
    values = np.asarray(values, dtype=np.float64)
    degrees = np.asarray(degrees, dtype=np.float64)
    rows = []
    if len(degrees):
        for x, low, high in degree_bins(degrees.max(), a):
            inside = (degrees >= low) & (degrees <= high)
            count = int(inside.sum())
            if count:
                rows.append((x, low, high, float(values[inside].mean()), count))
    return pd.DataFrame(rows, columns=["x", "low", "high", "mean", "count"])


@dataclass(frozen=True)
class DegreeSubset:
    """Nodes on one axis whose training degree lies in [min_degree, max_degree]."""
    axis: Axis = Axis.USER
    min_degree: int = None
    max_degree: int = None

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis(self.axis))
        if self.min_degree is None and self.max_degree is None:
            raise ConfigError("a degree subset needs min_degree and/or max_degree")

    @property
    def name(self):
        parts = []
        if self.min_degree is not None:
            parts.append("%s_degree>=%s" % (self.axis.value, self.min_degree))
        if self.max_degree is not None:
            parts.append("%s_degree<=%s" % (self.axis.value, self.max_degree))
        return ",".join(parts)

    def nodes(self, graph):
        degrees = graph.user_degree if self.axis is Axis.USER else graph.item_degree
        inside = degrees > 0
        if self.min_degree is not None:
            inside &= degrees >= self.min_degree
        if self.max_degree is not None:
            inside &= degrees <= self.max_degree
        return np.flatnonzero(inside)
