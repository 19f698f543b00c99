"""Exhaustive search over node partitions, for checking heuristics on tiny graphs."""

import numpy as np

from .summary import Partition, build_summary
from .utils.validation import check_graph

__all__ = ["MAX_ORACLE_NODES", "restricted_growth_strings", "partition_costs",
           "brute_force_optimal"]

MAX_ORACLE_NODES = 10


def restricted_growth_strings(n, k=None):
    """Yield every set partition of ``range(n)`` as a restricted growth string.

    ``a[0] = 0`` and ``a[i] <= 1 + max(a[:i])``; with ``k`` only strings using
    exactly ``k`` blocks are produced.  Order is lexicographic.
    """
    if n == 0:
        if k in (None, 0):
            yield ()
        return
    if k is not None and not 1 <= k <= n:
        return
    a = [0] * n

    def rec(i, m):
        # m = number of blocks used by a[:i]
        if i == n:
            if k is None or m == k:
                yield tuple(a)
            return
        if k is not None and m + (n - i) < k:
            return
        top = m if k is None else min(m, k - 1)
        for v in range(top + 1):
            a[i] = v
            yield from rec(i + 1, max(m, v + 1))

    yield from rec(1, 1)


def partition_costs(g, labels):
    """``(summary total, analytic correction count)`` for one labelling.

    Every (supernode pair, relation) cell with ``A`` edges among ``Pi`` pairs
    costs ``min(A, Pi - A + 1)`` in the summary and ``min(A, Pi - A)`` in the
    analytic count.
    """
    labels = np.asarray(labels, dtype=np.int64)
    e = g.edges
    if len(e) == 0:
        return 0, 0
    k = int(labels.max()) + 1
    sizes = np.bincount(labels, minlength=k)
    a, b = labels[e[:, 0]], labels[e[:, 1]]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    key = (lo * k + hi) * g.q + e[:, 2]
    uniq, count = np.unique(key, return_counts=True)
    pair = uniq // g.q
    lo, hi = pair // k, pair % k
    pi = np.where(lo == hi, sizes[lo] * (sizes[lo] - 1) // 2, sizes[lo] * sizes[hi])
    total = int(np.minimum(count, pi - count + 1).sum())
    corr = int(np.minimum(count, pi - count).sum())
    return total, corr


def brute_force_optimal(g, k=None, objective="cost", max_n=MAX_ORACLE_NODES):
    """Best partition by full enumeration (all partitions, or all with ``k`` blocks).

    ``objective`` is ``"cost"`` (summary total) or ``"corrections"`` (analytic
    correction count).  The first optimum in enumeration order is returned
    together with the cost breakdown of its summary.
    """
    check_graph(g)
    if g.n > max_n:
        raise ValueError(f"exhaustive search limited to {max_n} nodes, graph has {g.n}")
    if objective not in ("cost", "corrections"):
        raise ValueError(f"unknown objective {objective!r}")
    if k is not None and not 1 <= k <= max(g.n, 1):
        raise ValueError(f"k={k} out of range for n={g.n}")
    col = 0 if objective == "cost" else 1
    best, best_val = None, None
    for rgs in restricted_growth_strings(g.n, k):
        val = partition_costs(g, rgs)[col]
        if best_val is None or val < best_val:
            best, best_val = rgs, val
    p = Partition(np.asarray(best, dtype=np.int64))
    return p, build_summary(g, p).cost()
