"""Input validation helpers shared by the estimators and functions."""

from numbers import Integral

import numpy as np

from ..graph import MultiRelationGraph

__all__ = ["check_graph", "check_partition", "check_n_supernodes", "check_rng",
           "check_single_relation"]


def check_graph(g, *, name="graph"):
    if not isinstance(g, MultiRelationGraph):
        raise TypeError(f"{name} must be a MultiRelationGraph, got {type(g).__name__}")
    return g


def check_single_relation(g):
    check_graph(g)
    if g.q != 1:
        raise ValueError(f"expected a single-relation view, got q={g.q}")
    return g


def check_partition(p, g):
    """Coerce ``p`` to a :class:`~mrsum.summary.Partition` over ``g``'s nodes."""
    from ..summary import Partition

    if not isinstance(p, Partition):
        p = Partition(p)
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} nodes but graph has {g.n}")
    return p


def check_n_supernodes(k, n, *, name="k"):
    if not isinstance(k, Integral) or isinstance(k, bool):
        raise TypeError(f"{name} must be an integer, got {k!r}")
    if not 1 <= k <= n:
        raise ValueError(f"{name}={k} out of range [1, {n}]")
    return int(k)


def check_rng(seed):
    """Return a ``numpy.random.Generator`` for ``seed``.

    PCG64 streams are stable across platforms, which keeps seeded runs
    byte-reproducible.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        return np.random.default_rng()
    if isinstance(seed, Integral):
        return np.random.default_rng(int(seed))
    raise TypeError(f"seed must be None, an int or a Generator, got {seed!r}")
