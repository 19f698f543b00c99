"""Choosing the number of supernodes for k-Median+.

Greedy+ proposes ``k'``; a sweep of k-Median+ around ``k'`` then records the
relative size at each ``k`` and the bottom of that curve is chosen.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

from .holistic import greedy_plus_partition, kmedian_plus
from .utils.validation import check_graph

__all__ = ["SweepPoint", "suggest_k", "default_range", "sweep_k", "select_k", "curve_csv"]


class SweepPoint(NamedTuple):
    k: int
    relative_size: float
    total: int


def suggest_k(g):
    """Supernode count reached by Greedy+."""
    check_graph(g)
    return greedy_plus_partition(g)[0].k


def default_range(n, k_prime):
    """Window ``k' +/- max(5, n // 10)`` clipped to ``[1, n]``."""
    radius = max(5, n // 10)
    return max(1, k_prime - radius), max(1, min(n, k_prime + radius))


def sweep_k(g, k_min=None, k_max=None, step=1, seed=None, n_jobs=1, n_init=5):
    """Relative size of k-Median+ for every ``k`` in ``range(k_min, k_max + 1, step)``.

    Missing bounds come from :func:`default_range` around :func:`suggest_k`.
    """
    check_graph(g)
    if k_min is None or k_max is None:
        lo, hi = default_range(g.n, suggest_k(g))
        k_min = lo if k_min is None else k_min
        k_max = hi if k_max is None else k_max
    if not 1 <= k_min <= k_max <= g.n:
        raise ValueError(f"invalid k range [{k_min}, {k_max}] for n={g.n}")
    if step < 1:
        raise ValueError("step must be positive")
    ks = list(range(k_min, k_max + 1, step))

    def point(k):
        c = kmedian_plus(g, k, seed, n_init).cost()
        return SweepPoint(k, c.relative_size, c.total)

    if n_jobs is None or n_jobs <= 1:
        return [point(k) for k in ks]
    with ThreadPoolExecutor(max_workers=n_jobs) as ex:
        return list(ex.map(point, ks))


def select_k(curve):
    """``k`` at the minimum of the curve; the smallest such ``k`` on ties."""
    curve = [(int(p[0]), p[1]) for p in curve]
    if not curve:
        raise ValueError("empty curve")
    return min(curve, key=lambda kv: (kv[1], kv[0]))[0]


def curve_csv(curve):
    lines = ["k,relative_size"]
    lines += [f"{p[0]},{p[1]:.6f}" for p in curve]
    return "\n".join(lines) + "\n"
