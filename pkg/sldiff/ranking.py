"""Turning item scores into a user's recommendation list."""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.stats import rankdata


class TiePolicy(str, Enum):
    # average rank over a block of equal scores
    MIDRANK = "MIDRANK"
    # equal scores ordered by ascending item index, ranks 1..n
    ITEM_INDEX = "ITEM_INDEX"


@dataclass(frozen=True, eq=False)
class RankedList:
    """The uncollected items of one user ordered by descending score.

    ``entries`` is always ordered by (score desc, zero-degree items last,
    item index asc); ``ranks[i]`` is the rank of ``entries[i]`` under
    ``tie_policy``.
    """
    user: int
    entries: np.ndarray
    scores: np.ndarray
    ranks: np.ndarray
    tie_policy: TiePolicy
    positions: np.ndarray

    @property
    def list_size(self):
        return len(self.entries)

    def position_of(self, item):
        """1-based ordinal position of ``item``, None if collected."""
        position = self.positions[item]
        return int(position) if position else None

    def rank_of(self, item):
        """Rank of ``item`` under the list's tie policy, None if collected."""
        position = self.positions[item]
        return float(self.ranks[position - 1]) if position else None

    def top(self, L):
        return self.entries[:L]


def rank_items(scores, collected, tie_policy=TiePolicy.MIDRANK, user=None, cold_items=None):
    """Order every item not in ``collected`` by descending score.

    Parameters
    ----------
    scores : ResourceVector
        Item scores, length M
    collected : iterable of int
        Item indices to exclude (the user's training items)
    tie_policy : TiePolicy
        How ranks are assigned within blocks of equal score
    user : int, optional
        Recorded on the list
    cold_items : numpy.ndarray of bool, optional
        Items with zero training degree; they are placed after every other item
        of equal score

    Returns
    -------
    RankedList
    """
    scores = np.asarray(scores, dtype=np.float64)
    tie_policy = TiePolicy(tie_policy)
    num_items = len(scores)

    keep = np.ones(num_items, dtype=bool)
    keep[np.fromiter(collected, dtype=np.int64)] = False
    candidates = np.flatnonzero(keep)
    candidate_scores = scores[candidates]
    if cold_items is None:
        cold = np.zeros(len(candidates), dtype=bool)
    else:
        cold = np.asarray(cold_items, dtype=bool)[candidates]

    # lexsort sorts by the last key first
    order = np.lexsort((candidates, cold, -candidate_scores))
    entries = candidates[order]
    entry_scores = candidate_scores[order]

    if tie_policy is TiePolicy.MIDRANK and len(entries):
        ranks = rankdata(-entry_scores, method="average")
    else:
        ranks = np.arange(1, len(entries) + 1, dtype=np.float64)

    positions = np.zeros(num_items, dtype=np.int64)
    positions[entries] = np.arange(1, len(entries) + 1)
    return RankedList(user, entries, entry_scores, ranks, tie_policy, positions)


def rank_user(graph, user, scores, tie_policy=TiePolicy.MIDRANK):
    """rank_items for ``user`` of ``graph``: excludes their training items and
    pushes zero-degree items to the back of their tie block."""
    return rank_items(scores, graph.items_of(user), tie_policy, user=user,
                      cold_items=graph.item_degree == 0)
