"""Compiled inner loops of the merge engine.

Each kernel walks supernode pairs and relations directly instead of building
``(rows, cols, q)`` temporaries.  Integer semantics match the vectorized
formulas they replace exactly.
"""

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _cell(pairs, count):
    # min(|Pi| - |A| + 1, |A|); zero when there is no edge
    if count == 0:
        return 0
    alt = pairs - count + 1
    return alt if alt < count else count


@njit(cache=True)
def add_neighbor_share(A, s, alive, adj, z, sign, M):
    """Add ``sign`` times neighbor ``z``'s share of ``C(x ∪ y)`` to ``M``.

    Only pairs with an endpoint adjacent to ``z`` have a nonzero share.
    """
    n, q = A.shape[0], A.shape[2]
    sz = np.int64(s[z])
    for x in range(n):
        if not adj[z, x]:
            continue
        for y in range(n):
            if y == z or y == x or not alive[y]:
                continue
            pairs = (np.int64(s[x]) + s[y]) * sz
            tot = 0
            for r in range(q):
                tot += _cell(pairs, np.int64(A[x, z, r]) + A[y, z, r])
            M[x, y] += sign * tot
            if not adj[z, y]:
                M[y, x] += sign * tot


@njit(cache=True)
def merged_cost(A, s, alive, adj, x, ys):
    """``C(x ∪ y)`` for every slot ``y`` in ``ys``."""
    n, q = A.shape[0], A.shape[2]
    out = np.zeros(len(ys), dtype=np.int64)
    for i in range(len(ys)):
        y = ys[i]
        s_new = np.int64(s[x]) + s[y]
        tot = 0
        for z in range(n):
            if z == x or z == y or not (adj[x, z] or adj[y, z]):
                continue
            pairs = s_new * s[z]
            for r in range(q):
                tot += _cell(pairs, np.int64(A[x, z, r]) + A[y, z, r])
        own = s_new * (s_new - 1) // 2
        for r in range(q):
            tot += _cell(own, np.int64(A[x, x, r]) + A[y, y, r] + A[x, y, r])
        out[i] = tot
    return out


@njit(cache=True)
def best_pair(C, M, mask):
    """First pair ``x < y`` in row-major order maximizing ``(den - M) / den``.

    ``den = C[x] + C[y]``; a zero denominator counts as ratio 0.  Ratios are
    compared exactly by cross-multiplication.  Returns ``(-1, -1, 0, 0)`` when
    ``mask`` selects no pair.
    """
    n = M.shape[0]
    bx, by, bnum, bden = -1, -1, 0, 1
    found = False
    for x in range(n):
        for y in range(x + 1, n):
            if not mask[x, y]:
                continue
            den = C[x] + C[y]
            num = den - M[x, y]
            if den == 0:
                num, den = 0, 1
            if not found or num * bden > bnum * den:
                bx, by, bnum, bden = x, y, num, den
                found = True
    if not found:
        return -1, -1, 0, 0
    if bnum == 0 and C[bx] + C[by] == 0:
        return bx, by, 0, 0
    return bx, by, bnum, C[bx] + C[by]
