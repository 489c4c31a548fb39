"""Matrix-free resource diffusion on a user-object bipartite network.

The hybrid redistribution matrix

    W[a, b] = 1 / (k_a^(1-lambda) * k_b^lambda) * sum_j a[j, a] * a[j, b] / k_j

is never assembled. One macro-step f' = W f is two sparse passes over the
adjacency matrix: items to users, then users back to items. lambda = 1 is mass
diffusion (MD), lambda = 0 heat conduction (HC).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ColdStartError, ConfigError, DiffusionError

# ResourceVector: a dense float64 array indexed by item, length M
ResourceVector = np.ndarray


class Algorithm(str, Enum):
    HYBRID = "HYBRID"
    MD = "MD"
    HC = "HC"
    SLD = "SLD"
    USLD = "USLD"
    OSLD = "OSLD"
    RENBI = "RENBI"


# algorithms whose scores are built from the lambda=1 series f^(1) .. f^(n)
SERIES_ALGORITHMS = (Algorithm.MD, Algorithm.SLD, Algorithm.USLD, Algorithm.OSLD, Algorithm.RENBI)
THETA_ALGORITHMS = (Algorithm.USLD, Algorithm.OSLD, Algorithm.RENBI)


@dataclass(frozen=True)
class DiffusionParams:
    """One point of an algorithm's parameter space."""
    algorithm: Algorithm
    lam: float = 1.0
    macro_steps: int = 1
    theta: float = None

    def __post_init__(self):
        if not isinstance(self.algorithm, Algorithm):
            try:
                object.__setattr__(self, "algorithm", Algorithm(str(self.algorithm).upper()))
            except ValueError:
                raise ConfigError("unknown algorithm %r" % (self.algorithm,))
        if self.algorithm not in (Algorithm.SLD, Algorithm.USLD, Algorithm.OSLD):
            object.__setattr__(self, "macro_steps", 1)
        if self.algorithm is Algorithm.MD:
            object.__setattr__(self, "lam", 1.0)
        elif self.algorithm is Algorithm.HC:
            object.__setattr__(self, "lam", 0.0)
        if not 0.0 <= self.lam <= 1.0:
            raise ConfigError("lambda must lie in [0, 1] (got %s)" % self.lam)
        if int(self.macro_steps) != self.macro_steps or self.macro_steps < 1:
            raise ConfigError("macro_steps must be a positive integer (got %s)" % self.macro_steps)
        object.__setattr__(self, "macro_steps", int(self.macro_steps))
        if self.algorithm in THETA_ALGORITHMS:
            if self.theta is None:
                raise ConfigError("%s needs a theta value" % self.algorithm.value)
        elif self.theta is not None:
            raise ConfigError("%s takes no theta" % self.algorithm.value)

    @property
    def series_length(self):
        """Number of lambda=1 macro-steps the scorer needs, 0 for HYBRID/HC."""
        if self.algorithm is Algorithm.RENBI:
            return 2
        if self.algorithm in SERIES_ALGORITHMS:
            return self.macro_steps
        return 0

    def label(self):
        """Short parameter string used in report names, e.g. ``SLD_n5``."""
        parts = [self.algorithm.value]
        if self.algorithm is Algorithm.HYBRID:
            parts.append("lambda%s" % _fmt(self.lam))
        if self.algorithm in (Algorithm.SLD, Algorithm.USLD, Algorithm.OSLD):
            parts.append("n%d" % self.macro_steps)
        if self.theta is not None:
            parts.append("theta%s" % _fmt(self.theta))
        return "_".join(parts)

    def as_dict(self):
        return {"algorithm": self.algorithm.value, "lambda": self.lam,
                "macro_steps": self.macro_steps, "theta": self.theta}


def _fmt(value):
    return ("%.6g" % value).replace("-", "m")


def initial_resource(graph, user):
    """One unit of resource on every item collected by ``user``.

    Raises
    ------
    ColdStartError
        If ``user`` has no training edges
    """
    if graph.user_degree[user] < 1:
        raise ColdStartError(user)
    f = np.zeros(graph.num_items)
    f[graph.items_of(user)] = 1.0
    return f


def apply_w(graph, f, lam):
    """One macro-step of the hybrid diffusion, f' = W f.

    Parameters
    ----------
    graph : BipartiteGraph
    f : ResourceVector
        Non-negative item resource, length M
    lam : float
        Hybrid weight in [0, 1]; 1 is mass diffusion, 0 heat conduction

    Returns
    -------
    ResourceVector
        Items of degree 0 neither send nor receive resource and score 0
    """
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (graph.num_items,):
        raise DiffusionError("resource vector has shape %s, expected (%d,)" % (f.shape, graph.num_items))
    if np.isnan(f).any():
        raise DiffusionError("resource vector contains NaN")
    if (f < 0).any():
        raise DiffusionError("resource vector contains negative entries")
    if not 0.0 <= lam <= 1.0:
        raise DiffusionError("lambda must lie in [0, 1] (got %s)" % lam)

    k_items = graph.item_degree.astype(np.float64)
    k_users = graph.user_degree.astype(np.float64)
    reached = k_items > 0

    # items -> users: v_j = sum_b a_jb f_b / (k_b^lambda k_j)
    sent = np.zeros_like(f)
    np.divide(f, k_items ** lam, out=sent, where=reached)
    v = graph.user_adj @ sent
    np.divide(v, k_users, out=v, where=k_users > 0)

    # users -> items: f'_a = k_a^(lambda-1) sum_j a_ja v_j
    gathered = graph.item_adj @ v
    out = np.zeros_like(f)
    np.multiply(gathered, np.power(k_items, lam - 1.0, where=reached, out=np.ones_like(k_items)),
                out=out, where=reached)
    return out


def hybrid_scores(graph, user, lam):
    """The one macro-step hybrid score W f for ``user``."""
    return apply_w(graph, initial_resource(graph, user), lam)


def diffusion_series(graph, user, macro_steps):
    """The mass diffusion resource after 1 .. n macro-steps.

    Returns
    -------
    list of ResourceVector
        ``[f^(1), ..., f^(n)]`` where f^(i) = W^i f at lambda = 1
    """
    if macro_steps < 1:
        raise ConfigError("macro_steps must be at least 1 (got %s)" % macro_steps)
    f = initial_resource(graph, user)
    series = []
    for _ in range(macro_steps):
        f = apply_w(graph, f, 1.0)
        series.append(f)
    return series


def sld_scores(graph, user, macro_steps):
    """Semi-local diffusion: f^(n) = W^n f with lambda = 1; n = 1 is MD."""
    return diffusion_series(graph, user, macro_steps)[-1]


def combine_user_weighted(series, user_degree, theta):
    """F = f^(1) + sum_{i>=2} f^(i) / k_u^theta."""
    scores = series[0].copy()
    if len(series) > 1:
        scores += np.sum(series[1:], axis=0) / float(user_degree) ** theta
    return scores


def combine_item_weighted(series, item_degree, theta):
    """F_a = f^(1)_a + sum_{i>=2} f^(i)_a / k_a^theta; degree-0 items stay 0."""
    scores = series[0].copy()
    if len(series) > 1:
        k_items = item_degree.astype(np.float64)
        reached = k_items > 0
        higher = np.sum(series[1:], axis=0)
        weight = np.power(k_items, -theta, where=reached, out=np.zeros_like(k_items))
        scores += higher * weight
    return scores


def combine_renbi(series, theta):
    """f' = (W + theta W^2) f = f^(1) + theta f^(2)."""
    return series[0] + theta * series[1]


def usld_scores(graph, user, macro_steps, theta):
    """User-degree weighted semi-local diffusion (U-SLD)."""
    series = diffusion_series(graph, user, macro_steps)
    return combine_user_weighted(series, graph.user_degree[user], theta)


def osld_scores(graph, user, macro_steps, theta):
    """Object-degree weighted semi-local diffusion (O-SLD)."""
    series = diffusion_series(graph, user, macro_steps)
    return combine_item_weighted(series, graph.item_degree, theta)


def renbi_scores(graph, user, theta):
    """RENBI scores; entries may be negative when theta < 0."""
    return combine_renbi(diffusion_series(graph, user, 2), theta)


def scores_from_series(graph, user, params, series):
    """Score ``user`` under ``params`` reusing a precomputed lambda=1 series.

    ``series`` must hold at least ``params.series_length`` vectors; it is
    ignored for HYBRID and HC, which diffuse at their own lambda.
    """
    algorithm = params.algorithm
    if algorithm in (Algorithm.HYBRID, Algorithm.HC):
        return hybrid_scores(graph, user, params.lam)
    if len(series) < params.series_length:
        raise ConfigError("%s needs %d macro-steps, series has %d" % (
            params.label(), params.series_length, len(series)))
    if algorithm is Algorithm.MD:
        return series[0]
    if algorithm is Algorithm.SLD:
        return series[params.macro_steps - 1]
    if algorithm is Algorithm.USLD:
        return combine_user_weighted(series[:params.macro_steps], graph.user_degree[user], params.theta)
    if algorithm is Algorithm.OSLD:
        return combine_item_weighted(series[:params.macro_steps], graph.item_degree, params.theta)
    return combine_renbi(series, params.theta)


def score_user(graph, user, params):
    """Dispatch to the scorer named by ``params``."""
    series = []
    if params.series_length:
        series = diffusion_series(graph, user, params.series_length)
    return scores_from_series(graph, user, params, series)


def coverage(graph, user, steps=3, denominator="all"):
    """Fraction of items a walker from ``user`` can reach in exactly ``steps`` steps.

    The support of W^m f (lambda = 1) is the set of items reachable by a walk of
    2m + 1 bipartite steps, so ``steps`` must be odd.

    Parameters
    ----------
    graph : BipartiteGraph
    user : int
    steps : int
        Walk length counted from the user, odd and at least 1
    denominator : str
        ``all`` divides by M, ``uncollected`` counts only items the user has
        not collected, over M - k_u
    """
    if steps < 1 or steps % 2 == 0:
        raise ConfigError("coverage steps must be odd and positive (got %s)" % steps)
    f = initial_resource(graph, user)
    for _ in range((steps - 1) // 2):
        f = apply_w(graph, f, 1.0)
    reached = f > 0
    if denominator == "all":
        return np.count_nonzero(reached) / graph.num_items
    if denominator == "uncollected":
        uncollected = graph.num_items - graph.user_degree[user]
        if uncollected == 0:
            return 0.0
        reached[graph.items_of(user)] = False
        return np.count_nonzero(reached) / uncollected
    raise ConfigError("unknown coverage denominator %r" % (denominator,))
