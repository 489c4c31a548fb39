"""Synthetic sparse user-object networks with heavy-tailed degrees."""

import numpy as np
import pandas as pd

from .errors import ConfigError
from .graph import build_edge_set

MAX_ROUNDS = 1000


def _zipf_weights(size, exponent):
    weights = np.arange(1, size + 1, dtype=np.float64) ** -exponent
    return weights / weights.sum()


def _covering_links(num_users, num_items, rng):
    """max(N, M) links that touch every user and every item at least once."""
    size = max(num_users, num_items)
    return pd.DataFrame({
        "user": rng.permutation(np.arange(size) % num_users),
        "item": rng.permutation(np.arange(size) % num_items),
    }).drop_duplicates(ignore_index=True)


def generate_powerlaw_edges(num_users, num_items, num_links, exponent=0.8, seed=0):
    """Draw ``num_links`` distinct links with Zipf-weighted endpoints.

    Every user and item first gets one link, so the realised network has
    exactly ``num_users`` x ``num_items`` nodes. The remaining links pick users
    and items independently with probability proportional to rank^-exponent,
    so both degree sequences are heavy tailed; repeated pairs are redrawn until
    ``num_links`` distinct links exist. Ids are ``u<n>`` and ``i<n>``.

    Returns
    -------
    EdgeSet
    """
    if num_users < 1 or num_items < 1:
        raise ConfigError("num_users and num_items must be positive")
    if num_links > num_users * num_items:
        raise ConfigError("cannot place %d distinct links among %d x %d pairs" % (
            num_links, num_users, num_items))
    if num_links < max(num_users, num_items):
        raise ConfigError("%d links cannot touch all %d users and %d items" % (
            num_links, num_users, num_items))
    rng = np.random.default_rng(seed)
    user_p = _zipf_weights(num_users, exponent)
    item_p = _zipf_weights(num_items, exponent)

    links = _covering_links(num_users, num_items, rng)
    for _ in range(MAX_ROUNDS):
        if len(links.index) >= num_links:
            break
        batch = 2 * (num_links - len(links.index))
        drawn = pd.DataFrame({
            "user": rng.choice(num_users, size=batch, p=user_p),
            "item": rng.choice(num_items, size=batch, p=item_p),
        })
        links = pd.concat([links, drawn], ignore_index=True).drop_duplicates(ignore_index=True)
    if len(links.index) < num_links:
        raise ConfigError("could not draw %d distinct links, lower the exponent" % num_links)
    # the covering links come first and survive the cut
    links = links.iloc[:num_links]

    return build_edge_set(pd.DataFrame({
        "user": "u" + links["user"].astype(str),
        "item": "i" + links["item"].astype(str),
    }))
