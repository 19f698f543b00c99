"""Multi-relation graphs: loading, canonical storage and adjacency access.

A multi-relation graph is a node set shared by ``q`` relations (layers).
Every edge is an undirected triple ``(u, v, r)``; the same node pair may be
joined in several relations.  Node and relation labels are arbitrary
whitespace-free strings, interned to dense indices in first-appearance order.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CONCATENATED",
    "AdjacencyRow",
    "GraphFormatError",
    "MultiRelationGraph",
    "load_graph",
    "relation_view",
    "concatenated_row",
    "GRAPH_FORMATS",
]

GRAPH_FORMATS = ("triples", "relation-list")

#: Sentinel relation index of a row spanning all relations.
CONCATENATED = -1


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class AdjacencyRow:
    """Sparse 0/1 adjacency row.

    ``columns`` are strictly increasing.  For a concatenated row (``relation
    == CONCATENATED``) column ``r * n + w`` is set when ``(owner, w, r)`` is an
    edge; otherwise columns are plain neighbor indices.
    """

    owner: int
    relation: int
    columns: np.ndarray
    width: int

    def __len__(self):
        return len(self.columns)

    def block(self, r, n):
        """Columns of relation block ``r`` shifted back to ``[0, n)``."""
        if self.relation != CONCATENATED:
            raise ValueError("block() is only defined on concatenated rows")
        lo, hi = np.searchsorted(self.columns, [r * n, (r + 1) * n])
        return self.columns[lo:hi] - r * n

    def to_dense(self):
        out = np.zeros(self.width, dtype=np.uint8)
        out[self.columns] = 1
        return out


class MultiRelationGraph:
    """Immutable undirected multi-relation graph.

    Parameters
    ----------
    node_labels : sequence of str or int
        Node labels, or the number of nodes (labels become ``"0".."n-1"``).
    relation_labels : sequence of str or int
        Relation labels, or the number of relations.
    edges : iterable of (int, int, int)
        Edge triples over dense indices.  Reversed duplicates are merged.

    Raises
    ------
    ValueError
        On self-edges or out-of-range indices.
    """

    def __init__(self, node_labels, relation_labels, edges=()):
        if isinstance(node_labels, (int, np.integer)):
            node_labels = [str(i) for i in range(int(node_labels))]
        if isinstance(relation_labels, (int, np.integer)):
            relation_labels = [str(i) for i in range(int(relation_labels))]
        self._node_labels = tuple(str(x) for x in node_labels)
        self._relation_labels = tuple(str(x) for x in relation_labels)
        if len(set(self._node_labels)) != len(self._node_labels):
            raise ValueError("duplicate node label")
        if len(set(self._relation_labels)) != len(self._relation_labels):
            raise ValueError("duplicate relation label")
        n, q = len(self._node_labels), len(self._relation_labels)

        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64).reshape(-1, 3)
        if len(arr):
            if arr[:, :2].min() < 0 or arr[:, :2].max() >= n:
                raise ValueError("edge endpoint out of range")
            if arr[:, 2].min() < 0 or arr[:, 2].max() >= q:
                raise ValueError("edge relation out of range")
            if np.any(arr[:, 0] == arr[:, 1]):
                bad = arr[arr[:, 0] == arr[:, 1]][0]
                raise ValueError(f"self-edge on node {self._node_labels[bad[0]]!r}")
            lo = np.minimum(arr[:, 0], arr[:, 1])
            hi = np.maximum(arr[:, 0], arr[:, 1])
            arr = np.unique(np.stack([lo, hi, arr[:, 2]], axis=1), axis=0)
        arr.setflags(write=False)
        self._edges = arr
        self._csr = None
        self._edge_set = None

    @classmethod
    def from_triples(cls, triples, nodes=None, relations=None):
        """Build a graph from labelled ``(u, v, r)`` triples.

        Labels are interned in first-appearance order; ``nodes`` and
        ``relations`` may pre-declare labels (e.g. isolated nodes).
        """
        node_index, rel_index = {}, {}
        for x in nodes or ():
            node_index.setdefault(str(x), len(node_index))
        for x in relations or ():
            rel_index.setdefault(str(x), len(rel_index))
        idx = []
        for u, v, r in triples:
            u, v, r = str(u), str(v), str(r)
            iu = node_index.setdefault(u, len(node_index))
            iv = node_index.setdefault(v, len(node_index))
            ir = rel_index.setdefault(r, len(rel_index))
            idx.append((iu, iv, ir))
        return cls(list(node_index), list(rel_index), idx)

    # basic properties -------------------------------------------------
    @property
    def n(self):
        return len(self._node_labels)

    @property
    def q(self):
        return len(self._relation_labels)

    @property
    def m(self):
        return len(self._edges)

    @property
    def node_labels(self):
        return self._node_labels

    @property
    def relation_labels(self):
        return self._relation_labels

    @property
    def edges(self):
        """Canonical ``(m, 3)`` array of ``(u, v, r)`` with ``u < v``, sorted."""
        return self._edges

    @property
    def edge_set(self):
        if self._edge_set is None:
            self._edge_set = frozenset(map(tuple, self._edges.tolist()))
        return self._edge_set

    def node_index(self, label):
        try:
            return self._node_labels.index(str(label))
        except ValueError:
            raise KeyError(f"unknown node {label!r}") from None

    def __repr__(self):
        return f"MultiRelationGraph(n={self.n}, q={self.q}, m={self.m})"

    def __eq__(self, other):
        if not isinstance(other, MultiRelationGraph):
            return NotImplemented
        return (self._node_labels == other._node_labels
                and self._relation_labels == other._relation_labels
                and np.array_equal(self._edges, other._edges))

    __hash__ = None

    # adjacency --------------------------------------------------------
    def _build_csr(self):
        n, q = self.n, self.q
        indptr, indices = [], []
        e = self._edges
        for r in range(q):
            er = e[e[:, 2] == r]
            src = np.concatenate([er[:, 0], er[:, 1]])
            dst = np.concatenate([er[:, 1], er[:, 0]])
            order = np.lexsort((dst, src))
            src, dst = src[order], dst[order]
            ptr = np.zeros(n + 1, dtype=np.int64)
            np.add.at(ptr, src + 1, 1)
            indptr.append(np.cumsum(ptr))
            indices.append(dst)
        self._csr = (indptr, indices)

    def neighbors(self, u, r):
        """Sorted neighbor indices of ``u`` in relation ``r``."""
        if self._csr is None:
            self._build_csr()
        indptr, indices = self._csr
        return indices[r][indptr[r][u]:indptr[r][u + 1]]

    def degree(self, u, r=None):
        if r is not None:
            return len(self.neighbors(u, r))
        return sum(len(self.neighbors(u, s)) for s in range(self.q))

    def relation_edge_counts(self):
        return np.bincount(self._edges[:, 2], minlength=self.q)

    def adjacency_matrix(self, r):
        """Dense ``(n, n)`` 0/1 matrix of relation ``r``."""
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        er = self._edges[self._edges[:, 2] == r]
        a[er[:, 0], er[:, 1]] = 1
        a[er[:, 1], er[:, 0]] = 1
        return a

    def concatenated_matrix(self):
        """Dense ``(n, n*q)`` matrix ``(A_1 | ... | A_q)``."""
        n = self.n
        out = np.zeros((n, n * self.q), dtype=np.uint8)
        e = self._edges
        out[e[:, 0], e[:, 2] * n + e[:, 1]] = 1
        out[e[:, 1], e[:, 2] * n + e[:, 0]] = 1
        return out


def relation_view(g, r):
    """Single-relation graph holding the edges of relation ``r`` of ``g``.

    The view keeps ``g``'s node indexing; its only relation keeps ``r``'s label.
    """
    if not 0 <= r < g.q:
        raise IndexError(f"relation {r} out of range for q={g.q}")
    er = g.edges[g.edges[:, 2] == r].copy()
    er[:, 2] = 0
    return MultiRelationGraph(g.node_labels, [g.relation_labels[r]], er)


def concatenated_row(g, u):
    """Row ``u`` of the concatenated adjacency matrix, as an :class:`AdjacencyRow`."""
    if not 0 <= u < g.n:
        raise IndexError(f"node {u} out of range for n={g.n}")
    n = g.n
    cols = np.concatenate([g.neighbors(u, r) + r * n for r in range(g.q)]) \
        if g.q else np.zeros(0, dtype=np.int64)
    return AdjacencyRow(owner=u, relation=CONCATENATED,
                        columns=cols.astype(np.int64), width=n * g.q)


# --------------------------------------------------------------------------
# Parsing

def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
        return io.StringIO(data.decode("utf-8"))
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8"))
    if isinstance(source, io.TextIOBase):
        return source
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return io.StringIO(data)


def load_graph(source, format="triples", relations=None):
    """Parse a graph from a path, bytes or a (text or binary) stream.

    ``triples`` lines hold ``u v r``; ``relation-list`` lines hold
    ``u v r1,r2,...``.  Blank lines and ``#`` comments are skipped.  When
    ``relations`` is given (relation-list format) any other relation token is
    an error.
    """
    if format not in GRAPH_FORMATS:
        raise ValueError(f"unknown graph format {format!r}")
    allowed = None if relations is None else {str(r) for r in relations}
    triples = []
    for lineno, line in enumerate(_open_text(source), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise GraphFormatError(f"expected 3 fields, got {len(tokens)}", lineno)
        u, v, rel = tokens
        if u == v:
            raise GraphFormatError(f"self-edge on node {u!r}", lineno)
        if format == "triples":
            rels = [rel]
        else:
            rels = rel.split(",")
            if any(not r for r in rels):
                raise GraphFormatError("empty relation token", lineno)
        for r in rels:
            if allowed is not None and r not in allowed:
                raise GraphFormatError(f"unknown relation {r!r}", lineno)
            triples.append((u, v, r))
    return MultiRelationGraph.from_triples(triples, relations=relations)


def graph_lines(g, format="triples"):
    """Canonical serialization lines (without newlines) of ``g``'s edges."""
    nl, rl = g.node_labels, g.relation_labels
    if format == "triples":
        return [f"{nl[u]} {nl[v]} {rl[r]}" for u, v, r in g.edges.tolist()]
    if format == "relation-list":
        out, cur, rels = [], None, []
        for u, v, r in g.edges.tolist():
            if (u, v) != cur:
                if cur is not None:
                    out.append(f"{nl[cur[0]]} {nl[cur[1]]} {','.join(rels)}")
                cur, rels = (u, v), []
            rels.append(rl[r])
        if cur is not None:
            out.append(f"{nl[cur[0]]} {nl[cur[1]]} {','.join(rels)}")
        return out
    raise ValueError(f"unknown graph format {format!r}")


def dump_graph(g, format="triples"):
    """Serialize ``g`` to UTF-8 bytes."""
    return "".join(line + "\n" for line in graph_lines(g, format)).encode("utf-8")
