"""User-object bipartite networks: edge sets, the compressed graph and train/probe splits."""

import io
import json
import os
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
import scipy.sparse as sp

from .errors import ConfigError, DataError

# dense indices are stored as int32 inside the scipy CSR structures
INDEX_LIMIT = np.iinfo(np.int32).max


@dataclass(frozen=True, eq=False)
class EdgeSet:
    """A deduplicated set of (user, item) links over a fixed index space.

    ``users`` and ``items`` hold dense indices; ``user_ids``/``item_ids`` map a
    dense index back to the external id (order of first appearance).
    """
    users: np.ndarray
    items: np.ndarray
    user_ids: pd.Index
    item_ids: pd.Index
    duplicates: int = 0
    filtered: int = 0

    def __len__(self):
        return len(self.users)

    @property
    def num_users(self):
        return len(self.user_ids)

    @property
    def num_items(self):
        return len(self.item_ids)

    def take(self, positions):
        """Return the sub-set of links at ``positions``, sharing the index space."""
        positions = np.asarray(positions, dtype=np.int64)
        return EdgeSet(self.users[positions], self.items[positions],
                       self.user_ids, self.item_ids)

    def pairs(self):
        """The links as a list of external (user_id, item_id) tuples."""
        return list(zip(self.user_ids[self.users], self.item_ids[self.items]))

    def to_frame(self):
        return pd.DataFrame({
            "user": self.user_ids[self.users],
            "item": self.item_ids[self.items],
        })


def _encode(values, ids, axis):
    if ids is None:
        codes, ids = pd.factorize(values, sort=False)
    else:
        codes = ids.get_indexer(values)
        if (codes < 0).any():
            unknown = pd.unique(values[codes < 0])[:5]
            raise DataError("unknown %s ids: %s" % (axis, ", ".join(map(str, unknown))))
    if len(ids) > INDEX_LIMIT:
        raise DataError("%d distinct %s ids overflow the index space" % (len(ids), axis))
    return codes.astype(np.int64), pd.Index(ids)


def build_edge_set(pairs, user_ids=None, item_ids=None):
    """Map external ids to dense indices and drop repeated links.

    Parameters
    ----------
    pairs : iterable of (user_id, item_id) or pandas.DataFrame
        The interactions; a DataFrame must have ``user`` and ``item`` columns
    user_ids, item_ids : pandas.Index, optional
        A fixed index space to encode against; ids outside it are rejected.
        When omitted, ids are numbered in order of first appearance.

    Returns
    -------
    EdgeSet
        The deduplicated links, ``duplicates`` holding the number dropped
    """
    if isinstance(pairs, pd.DataFrame):
        frame = pairs[["user", "item"]]
    else:
        frame = pd.DataFrame(list(pairs), columns=["user", "item"])
    if len(frame.index) < 1:
        raise DataError("edge list is empty")
    if frame.isnull().sum().sum():
        raise DataError("edge list contains missing user or item ids")

    users, user_ids = _encode(frame["user"].to_numpy(), user_ids, "user")
    items, item_ids = _encode(frame["item"].to_numpy(), item_ids, "item")

    # the model is unary, so a repeated interaction is the same link
    repeated = pd.DataFrame({"user": users, "item": items}).duplicated(keep="first").to_numpy()
    return EdgeSet(users[~repeated], items[~repeated], user_ids, item_ids,
                   duplicates=int(repeated.sum()))


def read_edges(fn, rating_threshold=None, user_ids=None, item_ids=None):
    """Parse a tab separated interaction file.

    Lines are ``user<TAB>item[<TAB>rating]``; lines starting with ``#`` are
    comments. The rating column is discarded unless ``rating_threshold`` is set,
    in which case only interactions rated at least that value become links.

    Parameters
    ----------
    fn : str
        The interaction file to parse
    rating_threshold : float, optional
        Minimum rating for an interaction to count as a link
    user_ids, item_ids : pandas.Index, optional
        Encode against a stored index space (see read_split)

    Returns
    -------
    EdgeSet
    """
    if not os.path.exists(fn):
        raise DataError("dataset file doesn't exist (%s)" % fn)
    try:
        with open(fn, encoding="utf-8") as fh:
            skipcomments = "".join(row for row in fh if not row.startswith('#'))
    except (OSError, UnicodeDecodeError) as e:
        raise DataError("could not read %s: %s" % (fn, e))
    if not skipcomments.strip():
        raise DataError("dataset file is empty (%s)" % fn)

    # the rating column is optional per line, so size the frame by the widest line
    width = max(row.count('\t') for row in skipcomments.splitlines() if row.strip()) + 1
    if width < 2:
        raise DataError("dataset file needs at least user and item columns (%s)" % fn)
    try:
        interactions = pd.read_csv(io.StringIO(skipcomments), sep='\t', header=None,
                                   names=list(range(width)), dtype=str, keep_default_na=False)
    except pd.errors.ParserError as e:
        raise DataError("malformed dataset file %s: %s" % (fn, e))
    interactions = interactions.rename(columns={0: "user", 1: "item", 2: "rating"})
    endpoints = interactions[["user", "item"]]
    if endpoints.isnull().any().any() or (endpoints == "").any().any():
        raise DataError("lines without a user or item id in %s" % fn)

    filtered = 0
    if rating_threshold is not None:
        if "rating" not in interactions:
            raise DataError("a rating threshold was given but %s has no rating column" % fn)
        ratings = pd.to_numeric(interactions["rating"], errors="coerce")
        if ratings.isnull().any():
            raise DataError("missing or non-numeric ratings in %s" % fn)
        keep = ratings >= rating_threshold
        filtered = int((~keep).sum())
        interactions = interactions[keep]

    edges = build_edge_set(interactions, user_ids=user_ids, item_ids=item_ids)
    return EdgeSet(edges.users, edges.items, edges.user_ids, edges.item_ids,
                   duplicates=edges.duplicates, filtered=filtered)


def _frozen(array):
    array.flags.writeable = False
    return array


class BipartiteGraph:
    """Immutable user-object adjacency with degree lookup in both directions.

    ``user_adj`` is the N x M adjacency matrix A in CSR form (row j lists the
    items of user j, sorted); ``item_adj`` is its transpose, also CSR.
    """

    def __init__(self, user_adj, user_ids, item_ids, duplicates=0):
        user_adj = sp.csr_matrix(user_adj, dtype=np.float64)
        user_adj.sum_duplicates()
        user_adj.sort_indices()
        item_adj = user_adj.T.tocsr()
        item_adj.sort_indices()
        for matrix in (user_adj, item_adj):
            for array in (matrix.data, matrix.indices, matrix.indptr):
                _frozen(array)

        self.user_adj = user_adj
        self.item_adj = item_adj
        self.user_ids = pd.Index(user_ids)
        self.item_ids = pd.Index(item_ids)
        self.duplicates = duplicates
        self.user_degree = _frozen(np.diff(user_adj.indptr).astype(np.int64))
        self.item_degree = _frozen(np.diff(item_adj.indptr).astype(np.int64))

    @property
    def num_users(self):
        return self.user_adj.shape[0]

    @property
    def num_items(self):
        return self.user_adj.shape[1]

    @property
    def num_edges(self):
        return self.user_adj.nnz

    @property
    def sparsity(self):
        return self.num_edges / (self.num_users * self.num_items)

    def items_of(self, user):
        """Sorted item indices collected by ``user``."""
        start, end = self.user_adj.indptr[user], self.user_adj.indptr[user + 1]
        return self.user_adj.indices[start:end]

    def users_of(self, item):
        """Sorted user indices that collected ``item``."""
        start, end = self.item_adj.indptr[item], self.item_adj.indptr[item + 1]
        return self.item_adj.indices[start:end]

    def has_edge(self, user, item):
        items = self.items_of(user)
        pos = np.searchsorted(items, item)
        return bool(pos < len(items) and items[pos] == item)

    def cold_users(self):
        """Indices of users present in the index space with no edges."""
        return np.flatnonzero(self.user_degree == 0)

    def edges(self):
        """Enumerate the edges (row-major) as an EdgeSet over the same index space."""
        coo = self.user_adj.tocoo()
        return EdgeSet(coo.row.astype(np.int64), coo.col.astype(np.int64),
                       self.user_ids, self.item_ids)

    def __eq__(self, other):
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self.user_adj.shape == other.user_adj.shape
                and np.array_equal(self.user_adj.indptr, other.user_adj.indptr)
                and np.array_equal(self.user_adj.indices, other.user_adj.indices)
                and self.user_ids.equals(other.user_ids)
                and self.item_ids.equals(other.item_ids))

    __hash__ = None

    def __repr__(self):
        return "BipartiteGraph(users=%d, items=%d, edges=%d)" % (
            self.num_users, self.num_items, self.num_edges)


def build_graph(edges):
    """Materialise the adjacency matrix A from a list of links.

    Parameters
    ----------
    edges : EdgeSet or iterable of (user_id, item_id)
        The links; raw pairs are encoded and deduplicated first

    Returns
    -------
    BipartiteGraph
        Users and items of the edge set's index space with no link are kept
        with degree 0
    """
    if not isinstance(edges, EdgeSet):
        edges = build_edge_set(edges)
    if len(edges) < 1:
        raise DataError("cannot build a graph without edges")
    adjacency = sp.csr_matrix(
        (np.ones(len(edges)), (edges.users, edges.items)),
        shape=(edges.num_users, edges.num_items))
    return BipartiteGraph(adjacency, edges.user_ids, edges.item_ids, duplicates=edges.duplicates)


@dataclass(frozen=True, eq=False)
class SplitDataset:
    """A seeded partition of an edge set into training (E^T) and probe (E^P) links."""
    training: EdgeSet
    probe: EdgeSet
    seed: int
    ratio: float
    counts: dict = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "counts", {
            "training": len(self.training),
            "probe": len(self.probe),
            "users": self.training.num_users,
            "items": self.training.num_items,
        })

    def manifest(self):
        return {"seed": self.seed, "ratio": self.ratio, "counts": dict(self.counts)}


def split_train_probe(edges, ratio, seed):
    """Randomly partition ``edges`` into training and probe sets.

    The links are shuffled with a generator seeded by ``seed`` and the first
    round(ratio * |E|) go to the training set, so the split size is exact and
    the same (edges, ratio, seed) always gives the same partition. Both parts
    keep the full index space of ``edges``.

    Parameters
    ----------
    edges : EdgeSet
    ratio : float
        Training fraction, strictly between 0 and 1
    seed : int

    Returns
    -------
    SplitDataset
    """
    if not 0 < ratio < 1:
        raise ConfigError("split ratio must lie strictly between 0 and 1 (got %s)" % ratio)
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(edges))
    cut = int(np.floor(ratio * len(edges) + 0.5))
    return SplitDataset(edges.take(np.sort(order[:cut])), edges.take(np.sort(order[cut:])),
                        seed=seed, ratio=ratio)


def write_index(ids, fn):
    """Write an id map as ``index<TAB>id`` lines."""
    pd.DataFrame({"index": np.arange(len(ids)), "id": ids}).to_csv(
        fn, sep='\t', header=False, index=False)


def read_index(fn):
    ids = pd.read_csv(fn, sep='\t', header=None, names=["index", "id"],
                      dtype={"index": int, "id": str}, keep_default_na=False)
    if not np.array_equal(ids["index"].to_numpy(), np.arange(len(ids.index))):
        raise DataError("id map %s is not a contiguous index" % fn)
    return pd.Index(ids["id"])


def write_edges(edges, fn):
    edges.to_frame().to_csv(fn, sep='\t', header=False, index=False)


def write_split(split, directory):
    """Write training.tsv, probe.tsv, the id maps and a split.json manifest."""
    os.makedirs(directory, exist_ok=True)
    write_edges(split.training, os.path.join(directory, "training.tsv"))
    write_edges(split.probe, os.path.join(directory, "probe.tsv"))
    write_index(split.training.user_ids, os.path.join(directory, "users.tsv"))
    write_index(split.training.item_ids, os.path.join(directory, "items.tsv"))
    with open(os.path.join(directory, "split.json"), "w") as fh:
        json.dump(split.manifest(), fh, indent=4, sort_keys=True)


def read_split(directory):
    """Reload a split written by write_split into its original index space."""
    try:
        with open(os.path.join(directory, "split.json")) as fh:
            manifest = json.load(fh)
        user_ids = read_index(os.path.join(directory, "users.tsv"))
        item_ids = read_index(os.path.join(directory, "items.tsv"))
    except (OSError, ValueError, KeyError) as e:
        raise DataError("could not read split from %s: %s" % (directory, e))
    training = _read_part(os.path.join(directory, "training.tsv"), user_ids, item_ids)
    probe = _read_part(os.path.join(directory, "probe.tsv"), user_ids, item_ids)
    return SplitDataset(training, probe, seed=manifest["seed"], ratio=manifest["ratio"])


def _read_part(fn, user_ids, item_ids):
    # a small split can leave one part without links
    if os.path.isfile(fn) and os.path.getsize(fn) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return EdgeSet(empty, empty.copy(), user_ids, item_ids)
    return read_edges(fn, user_ids=user_ids, item_ids=item_ids)
