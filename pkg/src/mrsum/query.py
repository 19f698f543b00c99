"""Neighborhood queries answered from a summary without reconstructing it."""

from collections import Counter, defaultdict
from typing import NamedTuple

import numpy as np

from .summary import Summary, summarize_with_partition_cost
from .utils.validation import check_graph

__all__ = ["Neighborhood", "SummaryIndex", "neighborhood", "degree",
           "eigenvector_centrality", "classify", "classify_costs"]


class Neighborhood(NamedTuple):
    """``pairs``: set of ``(neighbor, relation)`` indices; ``histogram``: count per relation."""

    pairs: frozenset
    histogram: Counter

    def labelled(self, s):
        nl, rl = s.node_labels, s.relation_labels
        return {(nl[w], rl[r]) for w, r in self.pairs}


class SummaryIndex:
    """Per-supernode superedge lists and per-node correction lists."""

    def __init__(self, s):
        self.summary = s
        self.members = s.partition.members
        self.block = s.partition.labels
        self.label_index = {x: i for i, x in enumerate(s.node_labels)}
        self.superedges = defaultdict(list)
        for U, W, r in s.superedges:
            self.superedges[U].append((W, r))
            if U != W:
                self.superedges[W].append((U, r))
        self.plus = defaultdict(list)
        for u, v, r in s.c_plus:
            self.plus[u].append((v, r))
            self.plus[v].append((u, r))
        self.minus = defaultdict(set)
        for u, v, r in s.c_minus:
            self.minus[u].add((v, r))
            self.minus[v].add((u, r))

    def resolve(self, v):
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            if not 0 <= v < len(self.block):
                raise KeyError(f"node index {v} out of range")
            return int(v)
        try:
            return self.label_index[str(v)]
        except KeyError:
            raise KeyError(f"unknown node {v!r}") from None

    def neighborhood(self, v):
        v = self.resolve(v)
        out = set()
        for W, r in self.superedges.get(int(self.block[v]), ()):
            out.update((int(w), r) for w in self.members[W] if w != v)
        out.difference_update(self.minus.get(v, ()))
        out.update(self.plus.get(v, ()))
        hist = Counter(r for _, r in out)
        return Neighborhood(frozenset(out), hist)


def _index(s):
    idx = s.__dict__.get("_query_index")
    if idx is None:
        idx = SummaryIndex(s)
        # Summary is frozen; the index is a cache, not part of its value
        object.__setattr__(s, "_query_index", idx)
    return idx


def neighborhood(s, v):
    """Neighbors of ``v`` (label or index) over all relations, with a relation histogram.

    Only the superedges of ``v``'s supernode are expanded; ``v``'s correction
    entries are then applied.
    """
    if not isinstance(s, Summary):
        raise TypeError("expected a Summary")
    return _index(s).neighborhood(v)


def degree(s, v, r=None):
    nb = neighborhood(s, v)
    return len(nb.pairs) if r is None else nb.histogram.get(r, 0)


def eigenvector_centrality(s, max_iter=100, tol=1e-10):
    """Power iteration on the relation-summed adjacency, driven by neighborhood queries."""
    idx = _index(s)
    n = s.n
    nbrs = [[w for w, _ in idx.neighborhood(v).pairs] for v in range(n)]
    x = np.full(n, 1.0 / max(n, 1))
    for _ in range(max_iter):
        y = x.copy()  # shifted iteration converges on bipartite graphs too
        for v in range(n):
            y[v] += x[nbrs[v]].sum()
        norm = np.linalg.norm(y)
        if norm == 0:
            return y
        y /= norm
        if np.abs(y - x).sum() < tol:
            return y
        x = y
    return x


def classify_costs(g, candidates):
    check_graph(g)
    return [(label, summarize_with_partition_cost(g, p).total) for label, p in candidates]


def classify(g, candidates):
    """Label of the candidate partition that summarizes ``g`` most cheaply.

    ``candidates`` is a sequence of ``(label, partition)``; a partition may be
    a :class:`~mrsum.summary.Partition`, a ``{node: block}`` dict or a
    :class:`~mrsum.summary.Summary`.  Ties go to the earliest candidate.
    """
    costs = classify_costs(g, list(candidates))
    if not costs:
        raise ValueError("no candidates")
    best = min(range(len(costs)), key=lambda i: (costs[i][1], i))
    return costs[best][0]
