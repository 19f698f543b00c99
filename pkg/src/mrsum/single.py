"""Single-relation summarizers: Greedy, Randomized, SWeG and k-Median.

Each works on a one-relation graph (see :func:`~mrsum.graph.relation_view`).
Greedy, Randomized and SWeG share the merge engine used by the holistic
variants; with one relation its supernode cost is the classical one.
"""

from numbers import Integral

from . import _engine
from .base import BaseSummarizer
from .kmedian import kmedian_cluster
from .summary import build_summary
from .utils.validation import check_n_supernodes, check_rng, check_single_relation

__all__ = [
    "greedy_summarize",
    "randomized_summarize",
    "sweg_summarize",
    "kmedian_summarize",
    "greedy_partition",
    "randomized_partition",
    "sweg_partition",
    "kmedian_partition",
    "GreedySummarizer",
    "RandomizedSummarizer",
    "SWeGSummarizer",
    "KMedianSummarizer",
    "SINGLE_ALGORITHMS",
]

DEFAULT_SWEG_ITERATIONS = 20


def _check_k_target(k_target, n):
    if k_target is None:
        return None
    return check_n_supernodes(k_target, n, name="k_target")


def greedy_partition(view, k_target=None):
    check_single_relation(view)
    k_target = _check_k_target(k_target, view.n)
    p, _ = _engine.greedy_merge(view, k_target=k_target)
    return p


def greedy_summarize(view, k_target=None):
    """Merge the best 2-hop pair by fractional cost reduction until none helps.

    With ``k_target`` the run stops at ``k_target`` supernodes, merging the
    least harmful pairs if positive reductions run out first.
    """
    return build_summary(view, greedy_partition(view, k_target))


def randomized_partition(view, seed=None):
    check_single_relation(view)
    return _engine.randomized_merge(view, check_rng(seed))


def randomized_summarize(view, seed=None):
    """Visit unexplored supernodes in random order, merging each with its best
    2-hop partner while that lowers cost."""
    return build_summary(view, randomized_partition(view, seed))


def sweg_partition(view, T=DEFAULT_SWEG_ITERATIONS, seed=None):
    check_single_relation(view)
    if not isinstance(T, Integral) or T < 1:
        raise ValueError(f"T must be a positive integer, got {T!r}")
    return _engine.sweg_merge(view, int(T), check_rng(seed))


def sweg_summarize(view, T=DEFAULT_SWEG_ITERATIONS, seed=None):
    """``T`` rounds of shingle grouping followed by randomized merging per group."""
    return build_summary(view, sweg_partition(view, T, seed))


def kmedian_partition(view, k, seed=None, n_init=5):
    check_single_relation(view)
    return kmedian_cluster(view.adjacency_matrix(0), k, seed=seed, n_init=n_init)


def kmedian_summarize(view, k, seed=None, n_init=5):
    return build_summary(view, kmedian_partition(view, k, seed, n_init))


SINGLE_ALGORITHMS = ("greedy", "randomized", "sweg", "kmedian")


class _SingleRelation(BaseSummarizer):
    def _check_input(self, graph):
        return check_single_relation(graph)


class GreedySummarizer(_SingleRelation):
    def __init__(self, k_target=None):
        self.k_target = k_target

    def _partition(self, graph):
        return greedy_partition(graph, self.k_target)


class RandomizedSummarizer(_SingleRelation):
    def __init__(self, seed=42):
        self.seed = seed

    def _partition(self, graph):
        return randomized_partition(graph, self.seed)


class SWeGSummarizer(_SingleRelation):
    def __init__(self, T=DEFAULT_SWEG_ITERATIONS, seed=42):
        self.T = T
        self.seed = seed

    def _partition(self, graph):
        return sweg_partition(graph, self.T, self.seed)


class KMedianSummarizer(_SingleRelation):
    def __init__(self, k=2, seed=42, n_init=5):
        self.k = k
        self.seed = seed
        self.n_init = n_init

    def _partition(self, graph):
        return kmedian_partition(graph, self.k, self.seed, self.n_init)
