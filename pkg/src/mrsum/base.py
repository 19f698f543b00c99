"""Estimator base class for graph summarizers."""

from sklearn.base import BaseEstimator

from .summary import build_summary
from .utils.validation import check_graph


class BaseSummarizer(BaseEstimator):
    """``fit(graph)`` computes a partition and its minimum-cost summary.

    Subclasses implement ``_partition(graph)``.  After fitting:

    ``labels_``
        supernode id per node;
    ``summary_``
        the lossless :class:`~mrsum.summary.Summary`;
    ``cost_``
        its :class:`~mrsum.summary.CostBreakdown`;
    ``n_supernodes_``
        number of supernodes.
    """

    def _partition(self, graph):  # pragma: no cover - abstract
        raise NotImplementedError

    def _check_input(self, graph):
        return check_graph(graph)

    def fit(self, graph, y=None):
        graph = self._check_input(graph)
        p = self._partition(graph)
        self.summary_ = build_summary(graph, p)
        self.labels_ = self.summary_.partition.labels
        self.cost_ = self.summary_.cost()
        self.n_supernodes_ = self.summary_.k
        return self

    def fit_predict(self, graph, y=None):
        return self.fit(graph).labels_

    def score(self, graph, y=None):
        """Negative relative size of the fitted partition applied to ``graph``."""
        from .summary import summarize_with_partition_cost

        return -summarize_with_partition_cost(check_graph(graph), self.summary_).relative_size
