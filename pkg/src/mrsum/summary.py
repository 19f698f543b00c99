"""Lossless summaries: partitions, superedges and correction lists.

Given a node partition, the cheapest lossless summary is fully determined:
for every supernode pair ``(U, W)`` and relation ``r`` a superedge is kept
exactly when ``1 + |Pi_UW| - |A_UW,r| <= |A_UW,r|``, where ``Pi_UW`` is the set
of node pairs between the two supernodes and ``A_UW,r`` the edges among them.
On a tie both choices cost the same; the superedge is kept so that fully
connected pairs are always represented by superedges alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .graph import MultiRelationGraph
from .utils.validation import check_graph, check_partition

__all__ = [
    "Partition",
    "Summary",
    "CostBreakdown",
    "LosslessReport",
    "block_pair_counts",
    "build_summary",
    "cost",
    "correction_size_formula",
    "l1_reconstruction_error",
    "reconstruct",
    "verify_lossless",
    "summarize_with_partition_cost",
    "pair_count",
]


def pair_count(size_u, size_w, same):
    """Number of node pairs between two supernodes (unordered pairs if ``same``)."""
    if same:
        return size_u * (size_u - 1) // 2
    return size_u * size_w


class Partition:
    """Assignment of ``n`` nodes to contiguous supernode ids ``0..k-1``.

    Labels are canonicalised by first appearance, so two partitions with the
    same blocks compare equal regardless of how their ids were chosen.
    """

    __slots__ = ("_labels", "_members")

    def __init__(self, labels):
        labels = np.asarray(labels)
        if labels.ndim != 1:
            raise ValueError("partition labels must be one-dimensional")
        _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
        # rank blocks by the first node they contain
        rank = np.empty(len(first), dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(len(first))
        self._labels = rank[inverse.reshape(-1)].astype(np.int64)
        self._labels.setflags(write=False)
        self._members = None

    @classmethod
    def identity(cls, n):
        return cls(np.arange(n))

    @classmethod
    def single_block(cls, n):
        return cls(np.zeros(n, dtype=np.int64))

    @classmethod
    def from_blocks(cls, blocks, n=None):
        blocks = [list(b) for b in blocks]
        if n is None:
            n = sum(len(b) for b in blocks)
        labels = np.full(n, -1, dtype=np.int64)
        for i, b in enumerate(blocks):
            if np.any(labels[b] >= 0):
                raise ValueError("blocks overlap")
            labels[b] = i
        if np.any(labels < 0):
            raise ValueError("blocks do not cover all nodes")
        return cls(labels)

    @property
    def labels(self):
        return self._labels

    @property
    def n(self):
        return len(self._labels)

    @property
    def k(self):
        return int(self._labels.max()) + 1 if len(self._labels) else 0

    @property
    def sizes(self):
        return np.bincount(self._labels, minlength=self.k)

    @property
    def members(self):
        """List of sorted member index arrays, one per supernode."""
        if self._members is None:
            order = np.argsort(self._labels, kind="stable")
            bounds = np.cumsum(np.bincount(self._labels, minlength=self.k))[:-1]
            self._members = np.split(order, bounds)
        return self._members

    def blocks(self):
        return [set(m.tolist()) for m in self.members]

    def same_block(self, u, v):
        return self._labels[u] == self._labels[v]

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self._labels, other._labels)

    def __hash__(self):
        return hash(self._labels.tobytes())

    def __repr__(self):
        return f"Partition(k={self.k}, n={self.n})"


class CostBreakdown(NamedTuple):
    """Summary cost ``|E_S| + |C+| + |C-|`` and its ratio to the edge count."""

    superedge_count: int
    plus_count: int
    minus_count: int
    total: int
    n_edges: int

    @property
    def corrections(self):
        return self.plus_count + self.minus_count

    @property
    def relative_size_exact(self):
        if self.n_edges == 0:
            return Fraction(0)
        return Fraction(self.total, self.n_edges)

    @property
    def relative_size(self):
        return float(self.relative_size_exact)

    def as_dict(self):
        return {
            "superedges": self.superedge_count,
            "c_plus": self.plus_count,
            "c_minus": self.minus_count,
            "total": self.total,
            "edges": self.n_edges,
            "relative_size": self.relative_size,
        }


@dataclass(frozen=True)
class Summary:
    """Lossless summary of a multi-relation graph.

    ``superedges`` hold ``(U, W, r)`` with ``U <= W``; ``c_plus`` and
    ``c_minus`` hold node triples ``(u, v, r)`` with ``u < v``.  All three are
    sorted tuples.
    """

    partition: Partition
    superedges: tuple
    c_plus: tuple
    c_minus: tuple
    node_labels: tuple
    relation_labels: tuple
    n_edges: int = field(default=-1)

    def __post_init__(self):
        if self.n_edges < 0:
            sizes = self.partition.sizes
            m = sum(pair_count(sizes[u], sizes[w], u == w) for u, w, _ in self.superedges)
            object.__setattr__(self, "n_edges", int(m) + len(self.c_plus) - len(self.c_minus))

    @property
    def n(self):
        return len(self.node_labels)

    @property
    def q(self):
        return len(self.relation_labels)

    @property
    def k(self):
        return self.partition.k

    def cost(self):
        return cost(self)

    def __repr__(self):
        c = self.cost()
        return (f"Summary(k={self.k}, superedges={c.superedge_count}, "
                f"c_plus={c.plus_count}, c_minus={c.minus_count})")


def block_pair_counts(g, p):
    """Edge counts per (supernode pair, relation) for pairs holding any edge.

    Returns
    -------
    lo, hi, rel, count, pairs : ndarray
        Supernode ids ``lo <= hi``, relation, ``|A_UW,r|`` and ``|Pi_UW|``.
    """
    lab = p.labels
    e = g.edges
    if len(e) == 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z, z, z
    k, q = p.k, g.q
    a, b = lab[e[:, 0]], lab[e[:, 1]]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    key = (lo * k + hi) * q + e[:, 2]
    uniq, count = np.unique(key, return_counts=True)
    rel = uniq % q
    pair = uniq // q
    lo, hi = pair // k, pair % k
    sizes = p.sizes
    pairs = np.where(lo == hi, sizes[lo] * (sizes[lo] - 1) // 2, sizes[lo] * sizes[hi])
    return lo, hi, rel, count, pairs


def _missing_pairs(g, p, lo, hi, rel):
    """Node pairs under the given cells that are not edges, sorted."""
    n, q = g.n, g.q
    sizes = p.sizes
    order = np.argsort(p.labels, kind="stable")
    start = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    # enumerate |U| x |W| ordered member slots per cell; self cells keep a < b
    width = sizes[hi]
    span = sizes[lo] * width
    cell = np.repeat(np.arange(len(lo)), span)
    idx = np.arange(int(span.sum())) - np.repeat(np.cumsum(span) - span, span)
    a, b = idx // width[cell], idx % width[cell]
    ok = (lo[cell] != hi[cell]) | (a < b)
    cell, a, b = cell[ok], a[ok], b[ok]
    x = order[start[lo[cell]] + a]
    y = order[start[hi[cell]] + b]
    key = (np.minimum(x, y) * n + np.maximum(x, y)) * q + rel[cell]
    e = g.edges
    miss = np.sort(key[~np.isin(key, (e[:, 0] * n + e[:, 1]) * q + e[:, 2])])
    return list(zip((miss // q // n).tolist(), (miss // q % n).tolist(), (miss % q).tolist()))


def build_summary(g, p):
    """Minimum-cost lossless summary of ``g`` for the partition ``p``."""
    check_graph(g)
    p = check_partition(p, g)
    lab = p.labels
    e = g.edges
    superedges, c_plus, c_minus = [], [], []
    if len(e):
        k, q = p.k, g.q
        a, b = lab[e[:, 0]], lab[e[:, 1]]
        key = (np.minimum(a, b) * k + np.maximum(a, b)) * q + e[:, 2]
        lo, hi, rel, count, pairs = block_pair_counts(g, p)
        keep = 1 + pairs - count <= count
        ukey = ((lo * k + hi) * q + rel)
        covered = np.isin(key, ukey[keep])
        c_plus = [tuple(t) for t in e[~covered].tolist()]
        superedges = list(zip(lo[keep].tolist(), hi[keep].tolist(), rel[keep].tolist()))
        c_minus = _missing_pairs(g, p, lo[keep], hi[keep], rel[keep])
    return Summary(
        partition=p,
        superedges=tuple(sorted(superedges)),
        c_plus=tuple(sorted(c_plus)),
        c_minus=tuple(sorted(c_minus)),
        node_labels=g.node_labels,
        relation_labels=g.relation_labels,
        n_edges=g.m,
    )


def cost(s):
    se, cp, cm = len(s.superedges), len(s.c_plus), len(s.c_minus)
    return CostBreakdown(se, cp, cm, se + cp + cm, s.n_edges)


def correction_size_formula(g, p):
    """Analytic correction count: half the ordered-pair sum of cells times
    ``min(alpha, 1 - alpha)``, i.e. ``sum min(|A|, |Pi| - |A|)`` over unordered
    supernode pairs and relations.  Superedges are not charged.
    """
    p = check_partition(p, g)
    _, _, _, count, pairs = block_pair_counts(g, p)
    return Fraction(int(np.minimum(count, pairs - count).sum()))


def l1_reconstruction_error(g, p):
    """l1 distance between the adjacency matrices and their block-density
    expectation, over off-diagonal cells and all relations (exact)."""
    p = check_partition(p, g)
    _, _, _, count, pairs = block_pair_counts(g, p)
    total = Fraction(0)
    for a, pi in zip(count.tolist(), pairs.tolist()):
        # 2 ordered copies * 2 * pi * alpha * (1 - alpha)
        total += Fraction(4 * a * (pi - a), pi)
    return total


def _explode(s):
    members = s.partition.members
    out = set()
    for U, W, r in s.superedges:
        mu, mw = members[U].tolist(), members[W].tolist()
        if U == W:
            for i, x in enumerate(mu):
                for y in mu[i + 1:]:
                    out.add((x, y, r))
        else:
            for x in mu:
                for y in mw:
                    out.add((min(x, y), max(x, y), r))
    return out


def reconstruct(s):
    """Rebuild the original graph: explode superedges, add ``C+``, drop ``C-``."""
    edges = _explode(s)
    for t in s.c_minus:
        if t not in edges:
            raise ValueError(f"corrupt summary: C- triple {t} is not covered by a superedge")
        edges.remove(t)
    edges.update(s.c_plus)
    return MultiRelationGraph(s.node_labels, s.relation_labels, sorted(edges))


class LosslessReport(NamedTuple):
    ok: bool
    missing: tuple
    extra: tuple

    def __bool__(self):
        return self.ok


def verify_lossless(g, s):
    """Compare ``reconstruct(s)`` with ``g``; report missing and extra triples."""
    # node order may differ between files; the node sets may not
    if set(g.node_labels) != set(s.node_labels):
        return LosslessReport(False, (), ())
    try:
        h = reconstruct(s)
    except ValueError:
        return LosslessReport(False, (), ())
    # relation labels may be ordered differently; compare by label
    def labelled(x):
        nl, rl = x.node_labels, x.relation_labels
        return {(*sorted((nl[u], nl[v])), rl[r]) for u, v, r in x.edge_set}

    gl, hl = labelled(g), labelled(h)
    missing = tuple(sorted(gl - hl))
    extra = tuple(sorted(hl - gl))
    return LosslessReport(not missing and not extra, missing, extra)


def _foreign_partition(g, p):
    if isinstance(p, Summary):
        mapping = dict(zip(p.node_labels, p.partition.labels.tolist()))
    elif isinstance(p, dict):
        mapping = {str(k): v for k, v in p.items()}
    else:
        return check_partition(p, g)
    unknown = set(mapping) - set(g.node_labels)
    if unknown:
        raise ValueError(f"partition references nodes absent from the graph: {sorted(unknown)[:5]}")
    missing = [x for x in g.node_labels if x not in mapping]
    if missing:
        raise ValueError(f"partition does not cover graph nodes: {missing[:5]}")
    return Partition([mapping[x] for x in g.node_labels])


def summarize_with_partition_cost(g, p):
    """Cost of summarizing ``g`` with a partition that may come from another graph.

    ``p`` may be a :class:`Partition` over ``g``'s indexing, a
    ``{node_label: block}`` dict, or a :class:`Summary` whose mapping is used.
    """
    check_graph(g)
    return cost(build_summary(g, _foreign_partition(g, p)))
