"""Aggregating several partitions of one node set into a consensus partition.

The target minimizes the summed pairwise disagreement with the inputs, which
equals ``q`` times a correlation-clustering objective over the distances
``D(u, v)`` = fraction of inputs separating ``u`` and ``v``.  Distances are
kept as integer separation counts ``q * D(u, v)`` so every comparison below
is exact.
"""

from fractions import Fraction
from numbers import Real

import numpy as np

from .summary import Partition

__all__ = [
    "DistanceOracle",
    "disagreement",
    "correlation_cost",
    "aggregate_best",
    "aggregate_balls",
    "aggregate_agglomerative",
    "aggregate_furthest",
    "aggregate_localsearch",
    "AGGREGATORS",
    "aggregate",
]


def _as_partition(p):
    return p if isinstance(p, Partition) else Partition(p)


def _check_inputs(partitions):
    parts = [_as_partition(p) for p in partitions]
    if not parts:
        raise ValueError("at least one partition is required")
    n = parts[0].n
    if any(p.n != n for p in parts):
        raise ValueError("partitions cover different node sets")
    return parts


class DistanceOracle:
    """Pairwise separation counts over a fixed list of partitions.

    ``sep[u, v]`` is the number of inputs placing ``u`` and ``v`` in
    different blocks, so ``D(u, v) = sep[u, v] / q``.
    """

    def __init__(self, partitions):
        self.partitions = tuple(_check_inputs(partitions))
        self.q = len(self.partitions)
        self.n = self.partitions[0].n
        self._sep = None

    @property
    def sep(self):
        if self._sep is None:
            sep = np.zeros((self.n, self.n), dtype=np.int64)
            for p in self.partitions:
                lab = p.labels
                sep += lab[:, None] != lab[None, :]
            sep.setflags(write=False)
            self._sep = sep
        return self._sep

    def distance(self, u, v):
        return Fraction(int(self.sep[u, v]), self.q)

    def __len__(self):
        return self.q


def _same_pairs(sizes):
    sizes = np.asarray(sizes, dtype=np.int64)
    return int((sizes * (sizes - 1) // 2).sum())


def disagreement(p1, p2):
    """Number of unordered node pairs grouped together by exactly one of the two."""
    p1, p2 = _check_inputs([p1, p2])
    _, joint = np.unique(p1.labels * p2.k + p2.labels, return_counts=True)
    both = _same_pairs(joint)
    return _same_pairs(p1.sizes) + _same_pairs(p2.sizes) - 2 * both


def _oracle(partitions):
    return partitions if isinstance(partitions, DistanceOracle) else DistanceOracle(partitions)


def _scaled_cost(oracle, labels):
    """``q`` times the correlation-clustering cost of ``labels`` (an integer)."""
    sep = oracle.sep
    same = labels[:, None] == labels[None, :]
    iu = np.triu_indices(oracle.n, 1)
    s = sep[iu]
    return int(np.where(same[iu], s, oracle.q - s).sum())


def correlation_cost(partitions, p):
    """Same-block pairs pay ``D(u, v)``, cross-block pairs pay ``1 - D(u, v)``."""
    oracle = _oracle(partitions)
    p = _as_partition(p)
    if p.n != oracle.n:
        raise ValueError("partition covers a different node set")
    return Fraction(_scaled_cost(oracle, p.labels), oracle.q)


def aggregate_best(partitions):
    """The input partition with the least total disagreement to all inputs."""
    parts = _check_inputs(partitions)
    totals = [sum(disagreement(a, b) for b in parts) for a in parts]
    return parts[int(np.argmin(totals))]


def aggregate_balls(partitions, alpha=0.25):
    """Ball growing around pivots taken in order of increasing total distance.

    A pivot's ball holds the unclustered nodes within distance one half.  The
    ball becomes a cluster when its mean distance to the pivot is at most
    ``alpha``; otherwise the pivot stays alone.
    """
    if not isinstance(alpha, Real) or not 0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 1/2), got {alpha!r}")
    a = Fraction(alpha).limit_denominator(10**9)
    oracle = _oracle(partitions)
    sep, q, n = oracle.sep, oracle.q, oracle.n
    order = np.argsort(sep.sum(axis=1), kind="stable")
    labels = np.full(n, -1, dtype=np.int64)
    nxt = 0
    for u in order:
        if labels[u] >= 0:
            continue
        ball = np.flatnonzero((labels < 0) & (2 * sep[u] <= q))
        ball = ball[ball != u]
        labels[u] = nxt
        # mean of sep/q over the ball <= alpha, in integers
        if len(ball) and sep[u, ball].sum() * a.denominator <= a.numerator * q * len(ball):
            labels[ball] = nxt
        nxt += 1
    return Partition(labels)


def aggregate_agglomerative(partitions):
    """Average-linkage merging of the closest pair of groups while that
    average distance stays below one half."""
    oracle = _oracle(partitions)
    sep, q, n = oracle.sep, oracle.q, oracle.n
    S = sep.astype(np.int64).copy()
    size = np.ones(n, dtype=np.int64)
    alive = np.ones(n, dtype=bool)
    labels = np.arange(n)
    while alive.sum() > 1:
        pairs = size[:, None] * size[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            avg = S / np.where(pairs > 0, pairs, 1)
        mask = np.triu(alive[:, None] & alive[None, :], 1)
        avg = np.where(mask, avg, np.inf)
        x, y = divmod(int(np.argmin(avg)), n)
        if not 2 * S[x, y] < q * size[x] * size[y]:
            break
        S[x] += S[y]
        S[:, x] = S[x]
        S[x, x] = 0
        S[y] = 0
        S[:, y] = 0
        size[x] += size[y]
        size[y] = 0
        alive[y] = False
        labels[labels == y] = x
    return Partition(labels)


def _assign_to_centers(sep, centers):
    # nearest center, lowest center index on ties; centers keep themselves
    lab = np.argmin(sep[:, centers], axis=1)
    lab[centers] = np.arange(len(centers))
    return lab


def aggregate_furthest(partitions):
    """Top-down: add the node furthest from the current centers as a new
    center and reassign, for as long as the objective strictly improves."""
    oracle = _oracle(partitions)
    sep, n = oracle.sep, oracle.n
    best = np.zeros(n, dtype=np.int64)
    best_cost = _scaled_cost(oracle, best)
    if n < 2:
        return Partition(best)
    iu = np.triu_indices(n, 1)
    top = int(np.argmax(sep[iu]))
    centers = [int(iu[0][top]), int(iu[1][top])]
    while True:
        lab = _assign_to_centers(sep, centers)
        c = _scaled_cost(oracle, lab)
        if c >= best_cost:
            break
        best, best_cost = lab, c
        if len(centers) == n:
            break
        far = sep[:, centers].min(axis=1)
        far[centers] = -1
        centers.append(int(np.argmax(far)))
    return Partition(best)


def aggregate_localsearch(partitions, init=None, max_passes=50):
    """Node-by-node improvement: each node stays, moves to another group or
    becomes a singleton, whichever lowers the objective most.

    ``init`` defaults to the output of :func:`aggregate_furthest`.  Only strict
    improvements are applied, so the objective never increases.
    """
    oracle = _oracle(partitions)
    sep, q, n = oracle.sep, oracle.q, oracle.n
    if max_passes < 1:
        raise ValueError("max_passes must be positive")
    p = aggregate_furthest(oracle) if init is None else _as_partition(init)
    if p.n != n:
        raise ValueError("init covers a different node set")
    labels = p.labels.copy()
    for _ in range(max_passes):
        moved = False
        for v in range(n):
            width = int(labels.max()) + 2
            m = np.bincount(labels, weights=sep[v], minlength=width).astype(np.int64)
            s = np.bincount(labels, minlength=width)
            s[labels[v]] -= 1
            # placing v in group i costs 2*M_i - q*|C_i| plus a constant
            key = 2 * m - q * s
            key[s == 0] = 0
            # id width-1 is always unused, so it can stand for "alone"
            singleton = labels[v] if s[labels[v]] == 0 else width - 1
            options = np.flatnonzero(s > 0).tolist() + [singleton]
            cur = key[labels[v]]
            vals = [key[i] for i in options]
            j = int(np.argmin(vals))
            if vals[j] < cur:
                labels[v] = options[j]
                moved = True
        if not moved:
            break
    return Partition(labels)


AGGREGATORS = ("best", "balls", "agglomerative", "furthest", "localsearch")


def aggregate(partitions, method="furthest", alpha=0.25, max_passes=50):
    """Dispatch to one of the aggregators by name."""
    if method == "best":
        return aggregate_best(partitions)
    if method == "balls":
        return aggregate_balls(partitions, alpha)
    if method == "agglomerative":
        return aggregate_agglomerative(partitions)
    if method == "furthest":
        return aggregate_furthest(partitions)
    if method == "localsearch":
        return aggregate_localsearch(partitions, max_passes=max_passes)
    raise ValueError(f"unknown aggregator {method!r}")
