"""Agglomerative merge state shared by Greedy, Randomized and SWeG.

Supernodes live in slots indexed by their smallest member, so a merged
supernode keeps the lower of the two slots and slot order doubles as the
deterministic tie-break order.  Edge counts between supernodes are kept in a
dense ``(n, n, q)`` tensor; this bounds the engine to graphs of a few thousand
nodes, which is the intended scale.
"""

from fractions import Fraction

import numpy as np

from . import _kernels
from .summary import Partition, block_pair_counts


def _pair_cost(pairs, counts):
    # min(|Pi| - |A| + 1, |A|); zero when there is no edge
    return np.minimum(pairs - counts + 1, counts)


class MergeState:
    """Supernode costs ``C(U)`` summed over relations, with merge support.

    ``C(U) = sum_r sum_{X in N_r(U)} min(|Pi_UX| - |A_UX,r| + 1, |A_UX,r|)``
    where ``X`` ranges over supernodes sharing an edge with ``U`` in relation
    ``r`` (``U`` itself included when it holds internal edges).
    """

    def __init__(self, g, partition=None):
        n, q = g.n, g.q
        self.n, self.q = n, q
        if partition is None:
            partition = Partition.identity(n)
        members = partition.members
        slot_of_block = np.array([int(m[0]) for m in members], dtype=np.int64)
        # int32 storage halves memory traffic; counts and pair totals of
        # graphs this engine targets stay far below 2**31
        self.size = np.zeros(n, dtype=np.int32)
        self.size[slot_of_block] = partition.sizes
        self.alive = np.zeros(n, dtype=bool)
        self.alive[slot_of_block] = True
        self.members = {int(s): m.tolist() for s, m in zip(slot_of_block, members)}
        self.A = np.zeros((n, n, max(q, 1)), dtype=np.int32)
        lo, hi, rel, count, _ = block_pair_counts(g, partition)
        if len(lo):
            sl, sh = slot_of_block[lo], slot_of_block[hi]
            self.A[sl, sh, rel] = count
            self.A[sh, sl, rel] = count
        self.adj = self.A.any(axis=2)
        np.fill_diagonal(self.adj, False)
        self.C = self._all_costs()

    # cost primitives --------------------------------------------------
    def _pairs_matrix(self):
        s = self.size
        P = s[:, None] * s[None, :]
        np.fill_diagonal(P, s * (s - 1) // 2)
        return P

    def _all_costs(self):
        P = self._pairs_matrix()
        return _pair_cost(P[:, :, None], self.A).sum(axis=(1, 2))

    def row_cost(self, u):
        s = self.size
        P = s[u] * s
        P[u] = s[u] * (s[u] - 1) // 2
        return int(_pair_cost(P[:, None], self.A[u]).sum())

    def merged_cost(self, x, ys):
        """``C(x ∪ y)`` for every slot ``y`` in ``ys`` (none equal to ``x``)."""
        ys = np.asarray(ys, dtype=np.int64)
        return _kernels.merged_cost(self.A, self.size, self.alive, self.adj, x, ys)

    def gains(self, x, ys):
        """Numerators and denominators of the fractional reduction for ``(x, y)``."""
        merged = self.merged_cost(x, ys)
        den = self.C[x] + self.C[ys]
        return den - merged, den

    # mutation ---------------------------------------------------------
    def merge(self, u, w):
        """Merge slots ``u`` and ``w``; returns the slot of the new supernode."""
        h, d = (u, w) if u < w else (w, u)
        A, s = self.A, self.size
        nb = np.flatnonzero(self.adj[u] | self.adj[w])
        nb = nb[(nb != u) & (nb != w)]
        # drop the old pair costs of neighbors towards u and w
        for z in (u, w):
            P = s[nb] * s[z]
            self.C[nb] -= _pair_cost(P[:, None], A[nb, z]).sum(axis=1)
        self_row = A[u, u] + A[w, w] + A[u, w]
        A[h] = A[u] + A[w]
        A[:, h] = A[h]
        A[h, h] = self_row
        A[d] = 0
        A[:, d] = 0
        s[h] = s[u] + s[w]
        s[d] = 0
        self.alive[d] = False
        self.adj[h] = self.adj[u] | self.adj[w]
        self.adj[:, h] = self.adj[h]
        self.adj[d] = False
        self.adj[:, d] = False
        self.adj[h, h] = False
        P = s[nb] * s[h]
        self.C[nb] += _pair_cost(P[:, None], A[nb, h]).sum(axis=1)
        self.C[d] = 0
        self.C[h] = self.row_cost(h)
        self.members[h] = sorted(self.members.pop(u) + self.members.pop(w))
        return h

    # helpers ----------------------------------------------------------
    def two_hop(self, x):
        """Alive slots within two hops of ``x`` (excluding ``x``)."""
        row = self.adj[x] | self.adj[self.adj[x]].any(axis=0)
        row &= self.alive
        row[x] = False
        return row

    def partition(self):
        labels = np.empty(self.n, dtype=np.int64)
        for slot, mem in self.members.items():
            labels[mem] = slot
        return Partition(labels)

    @property
    def k(self):
        return int(self.alive.sum())


# --------------------------------------------------------------------------
# Greedy

class _GreedyIndex:
    """Merged costs ``C(X ∪ Y)`` for all alive pairs, kept current across merges."""

    def __init__(self, state):
        self.st = st = state
        n = st.n
        A, s = st.A, st.size
        M = np.zeros((n, n), dtype=np.int64)
        self.M = M
        if st.alive.all() and (s == 1).all():
            self._singleton_neighbor_costs()
        else:
            for z in np.flatnonzero(st.alive):
                self._add_z(z, 1)
        S = A.diagonal(axis1=0, axis2=1).T  # (n, q) internal counts
        sa = S[:, None, :] + S[None, :, :] + A
        ss = s[:, None] + s[None, :]
        M += _pair_cost((ss * (ss - 1) // 2)[:, :, None], sa).sum(axis=2)
        adj = st.adj.astype(np.float32)
        cand = (adj @ adj > 0) | st.adj
        np.fill_diagonal(cand, False)
        alive = st.alive
        cand &= alive[:, None] & alive[None, :]
        self.cand = cand

    def _singleton_neighbor_costs(self):
        # with singleton supernodes each neighbor cell holds 0, 1 or 2 of its
        # 2 pairs, costing 0, 1, 1: the count of z adjacent to x or y
        A, M = self.st.A, self.M
        for r in range(A.shape[2]):
            a = A[:, :, r]
            deg = a.sum(axis=1)
            af = a.astype(np.float64)
            common = np.rint(af @ af).astype(np.int64)
            M += deg[:, None] + deg[None, :] - 2 * a - common
        np.fill_diagonal(M, 0)

    def _add_z(self, z, sign):
        """Add ``sign`` times the share of neighbor ``z`` in every pair cost."""
        st = self.st
        _kernels.add_neighbor_share(st.A, st.size, st.alive, st.adj, z, sign, self.M)

    def merge(self, u, w):
        st = self.st
        self._add_z(u, -1)
        self._add_z(w, -1)
        h = st.merge(u, w)
        d = w if h == u else u
        self._add_z(h, 1)
        others = np.flatnonzero(st.alive)
        others = others[others != h]
        row = st.merged_cost(h, others)
        self.M[h, :] = 0
        self.M[:, h] = 0
        self.M[h, others] = row
        self.M[others, h] = row
        self.M[d, :] = 0
        self.M[:, d] = 0
        self.cand[d, :] = False
        self.cand[:, d] = False
        row = st.two_hop(h)
        self.cand[h, :] = row
        self.cand[:, h] = row
        return h

    def best(self, restrict_to_candidates=True):
        """Best pair ``(x, y, num, den)`` by fractional reduction, or ``None``.

        Ties go to the lexicographically smallest slot pair.
        """
        st = self.st
        alive = st.alive
        if restrict_to_candidates:
            mask = np.triu(self.cand, 1)
        else:
            mask = np.triu(alive[:, None] & alive[None, :], 1)
        x, y, num, den = _kernels.best_pair(st.C, self.M, mask)
        if x < 0:
            return None
        return int(x), int(y), int(num), int(den)


def greedy_merge(g, partition=None, k_target=None, positive_only=False):
    """Greedy agglomeration by maximum fractional cost reduction.

    Returns the final :class:`Partition` and the merge trace, a list of
    ``(members_u, members_w, reduction)`` with ``reduction`` a ``Fraction``.
    """
    st = MergeState(g, partition)
    idx = _GreedyIndex(st)
    trace = []
    while st.k > 1 and (k_target is None or st.k > k_target):
        best = idx.best()
        forced = False
        if best is None or best[2] <= 0:
            if k_target is None or positive_only:
                break
            # forced phase: least sacrifice, any pair if no 2-hop pair is left
            forced = True
            if best is None:
                best = idx.best(restrict_to_candidates=False)
        x, y, num, den = best
        frac = Fraction(num, den) if den else Fraction(0)
        trace.append((list(st.members[x]), list(st.members[y]), frac, forced))
        idx.merge(x, y)
    return st.partition(), trace


# --------------------------------------------------------------------------
# Randomized / SWeG

def _best_of(st, x, ys):
    num, den = st.gains(x, ys)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(den > 0, num / np.where(den > 0, den, 1), 0.0)
    i = int(np.argmax(ratio))
    return int(ys[i]), int(num[i]), int(den[i])


def _randomized_pass(st, pool, rng, candidates):
    """Randomized merging over the slots in ``pool`` (a sorted list).

    ``candidates(x, unexplored_mask)`` yields the slots ``x`` may merge with.
    """
    unexplored = sorted(pool)
    mask = np.zeros(st.n, dtype=bool)
    mask[unexplored] = True
    merges = 0
    while unexplored:
        i = int(rng.integers(len(unexplored)))
        x = unexplored[i]
        ys = candidates(x, mask)
        if len(ys):
            y, num, den = _best_of(st, x, ys)
            if num > 0:
                h = st.merge(x, y)
                d = y if h == x else x
                # the merged node keeps the lower slot, which is still unexplored
                mask[d] = False
                unexplored.remove(d)
                merges += 1
                continue
        unexplored.pop(i)
        mask[x] = False
    return merges


def randomized_merge(g, rng, partition=None):
    st = MergeState(g, partition)

    def candidates(x, mask):
        row = st.two_hop(x) & mask
        return np.flatnonzero(row)

    _randomized_pass(st, np.flatnonzero(st.alive).tolist(), rng, candidates)
    return st.partition()


def shingles(g, h):
    """Per-node shingle ``min h`` over the closed neighborhood, all relations."""
    f = np.asarray(h).copy()
    e = g.edges
    if len(e):
        np.minimum.at(f, e[:, 0], h[e[:, 1]])
        np.minimum.at(f, e[:, 1], h[e[:, 0]])
    return f


def sweg_merge(g, n_iter, rng):
    st = MergeState(g)
    n = g.n
    for _ in range(n_iter):
        h = rng.permutation(n) + 1
        f = shingles(g, h)
        slots = np.flatnonzero(st.alive)
        F = np.array([f[st.members[int(s)]].min() for s in slots])
        group_of = np.zeros(n, dtype=np.int64)
        group_of[slots] = F

        def candidates(x, mask):
            row = mask & (group_of == group_of[x])
            row[x] = False
            return np.flatnonzero(row)

        for key in np.unique(F):
            pool = slots[F == key].tolist()
            if len(pool) > 1:
                _randomized_pass(st, pool, rng, candidates)
    return st.partition()
