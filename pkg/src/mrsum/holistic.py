"""Holistic multi-relation summarizers and the two-step pipeline.

Greedy+, Randomized+ and k-Median+ pick one partition for all relations at
once.  The two-step pipeline summarizes each relation separately and then
aggregates the per-relation partitions.  Hybrid seeds Greedy+ merging with a
k-Median+ partition.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _engine
from .aggregation import AGGREGATORS, aggregate
from .base import BaseSummarizer
from .graph import relation_view
from .kmedian import kmedian_cluster
from .single import (DEFAULT_SWEG_ITERATIONS, SINGLE_ALGORITHMS, greedy_partition,
                     kmedian_partition, randomized_partition, sweg_partition)
from .summary import build_summary
from .utils.validation import check_graph, check_n_supernodes, check_rng

__all__ = [
    "MergeStep",
    "greedy_plus",
    "greedy_plus_partition",
    "randomized_plus",
    "kmedian_plus",
    "two_step",
    "two_step_partitions",
    "hybrid",
    "GreedyPlusSummarizer",
    "RandomizedPlusSummarizer",
    "KMedianPlusSummarizer",
    "TwoStepSummarizer",
    "HybridSummarizer",
]


class MergeStep(tuple):
    """One Greedy+ merge: member lists of both sides, fractional reduction
    (a ``Fraction``) and whether the merge was forced to reach a target k."""

    __slots__ = ()

    def __new__(cls, left, right, reduction, forced):
        return super().__new__(cls, (tuple(left), tuple(right), reduction, forced))

    left = property(lambda self: self[0])
    right = property(lambda self: self[1])
    reduction = property(lambda self: self[2])
    forced = property(lambda self: self[3])


def greedy_plus_partition(g, k_target=None, partition=None, positive_only=False):
    """Greedy+ merging; returns ``(Partition, [MergeStep, ...])``."""
    check_graph(g)
    if k_target is not None:
        k_target = check_n_supernodes(k_target, g.n, name="k_target")
    p, trace = _engine.greedy_merge(g, partition=partition, k_target=k_target,
                                    positive_only=positive_only)
    return p, [MergeStep(*t) for t in trace]


def greedy_plus(g, k_target=None):
    """Greedy merging on supernode costs summed over all relations."""
    p, _ = greedy_plus_partition(g, k_target)
    return build_summary(g, p)


def randomized_plus(g, seed=None):
    check_graph(g)
    return build_summary(g, _engine.randomized_merge(g, check_rng(seed)))


def _kmedian_plus_partition(g, k, seed, n_init=5):
    check_graph(g)
    return kmedian_cluster(g.concatenated_matrix(), k, seed=seed, n_init=n_init)


def kmedian_plus(g, k, seed=None, n_init=5):
    """k-median over rows of the concatenated adjacency matrix ``(A_1 | ... | A_q)``."""
    return build_summary(g, _kmedian_plus_partition(g, k, seed, n_init))


# --------------------------------------------------------------------------
# two-step

def _single_partition(view, algo, seed, params):
    if algo == "greedy":
        return greedy_partition(view)
    if algo == "randomized":
        return randomized_partition(view, seed)
    if algo == "sweg":
        return sweg_partition(view, params.get("T", DEFAULT_SWEG_ITERATIONS), seed)
    if algo == "kmedian":
        k = params.get("k")
        if k is None:
            k = greedy_partition(view).k
        return kmedian_partition(view, min(int(k), view.n), seed)
    raise ValueError(f"unknown single-relation algorithm {algo!r}")


def two_step_partitions(g, single="greedy", params=None, seed=None, n_jobs=1):
    """Per-relation partitions from a single-relation algorithm.

    Relation ``r`` receives its own seed drawn from ``seed``, so the output
    does not depend on ``n_jobs``.
    """
    check_graph(g)
    if single not in SINGLE_ALGORITHMS:
        raise ValueError(f"unknown single-relation algorithm {single!r}")
    if g.q == 0:
        raise ValueError("graph has no relations")
    params = dict(params or {})
    children = np.random.SeedSequence(seed if seed is not None else 0).spawn(g.q)
    seeds = [np.random.default_rng(c) for c in children]

    def run(r):
        return _single_partition(relation_view(g, r), single, seeds[r], params)

    if n_jobs is None or n_jobs <= 1:
        return [run(r) for r in range(g.q)]
    with ThreadPoolExecutor(max_workers=n_jobs) as ex:
        return list(ex.map(run, range(g.q)))


def two_step(g, single="greedy", agg="furthest", params=None, seed=None, n_jobs=1):
    """Summarize each relation, aggregate the partitions, summarize ``g`` with the result.

    ``params`` may hold ``T`` (SWeG), ``k`` (k-Median), ``alpha`` (Balls)
    and ``max_passes`` (LocalSearch).
    """
    if agg not in AGGREGATORS:
        raise ValueError(f"unknown aggregator {agg!r}")
    params = dict(params or {})
    parts = two_step_partitions(g, single, params, seed, n_jobs)
    p = aggregate(parts, agg, alpha=params.get("alpha", 0.25),
                  max_passes=params.get("max_passes", 50))
    return build_summary(g, p)


# --------------------------------------------------------------------------
# hybrid

def _hybrid(g, k_override=None, seed=None, n_init=5):
    check_graph(g)
    if k_override is None:
        k = greedy_plus_partition(g)[0].k
    else:
        k = check_n_supernodes(k_override, g.n, name="k_override")
    base = kmedian_plus(g, k, seed, n_init)
    p, _ = _engine.greedy_merge(g, partition=base.partition, positive_only=True)
    improved = build_summary(g, p)
    best = improved if improved.cost().total < base.cost().total else base
    return best, k, base


def hybrid(g, k_override=None, seed=None, n_init=5):
    """k-Median+ at the Greedy+ supernode count, refined by positive Greedy+ merges.

    The cheaper of the k-Median+ summary and its refinement is returned.
    """
    return _hybrid(g, k_override, seed, n_init)[0]


# --------------------------------------------------------------------------
# estimators

class GreedyPlusSummarizer(BaseSummarizer):
    """Greedy+ as an estimator; ``merge_history_`` lists the :class:`MergeStep` s."""

    def __init__(self, k_target=None):
        self.k_target = k_target

    def _partition(self, graph):
        p, self.merge_history_ = greedy_plus_partition(graph, self.k_target)
        return p


class RandomizedPlusSummarizer(BaseSummarizer):
    def __init__(self, seed=42):
        self.seed = seed

    def _partition(self, graph):
        return _engine.randomized_merge(graph, check_rng(self.seed))


class KMedianPlusSummarizer(BaseSummarizer):
    def __init__(self, k=2, seed=42, n_init=5):
        self.k = k
        self.seed = seed
        self.n_init = n_init

    def _partition(self, graph):
        return _kmedian_plus_partition(graph, self.k, self.seed, self.n_init)


class TwoStepSummarizer(BaseSummarizer):
    """Two-step pipeline; ``relation_partitions_`` keeps the per-relation inputs."""

    def __init__(self, single="greedy", agg="furthest", seed=42, n_jobs=1,
                 T=DEFAULT_SWEG_ITERATIONS, k=None, alpha=0.25, max_passes=50):
        self.single = single
        self.agg = agg
        self.seed = seed
        self.n_jobs = n_jobs
        self.T = T
        self.k = k
        self.alpha = alpha
        self.max_passes = max_passes

    def _partition(self, graph):
        params = {"T": self.T, "k": self.k}
        parts = two_step_partitions(graph, self.single, params, self.seed, self.n_jobs)
        self.relation_partitions_ = parts
        return aggregate(parts, self.agg, alpha=self.alpha, max_passes=self.max_passes)


class HybridSummarizer(BaseSummarizer):
    """Hybrid; ``k_prime_`` is the k used for k-Median+, ``kmedian_summary_`` its output."""

    def __init__(self, k_override=None, seed=42, n_init=5):
        self.k_override = k_override
        self.seed = seed
        self.n_init = n_init

    def _partition(self, graph):
        best, self.k_prime_, self.kmedian_summary_ = _hybrid(
            graph, self.k_override, self.seed, self.n_init)
        return best.partition
