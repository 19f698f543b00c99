"""Lossless summarization of multi-relation graphs.

A summary groups nodes into supernodes, joins supernodes with superedges
per relation and lists the edge corrections needed to rebuild the graph
exactly.
"""

from .aggregation import (DistanceOracle, aggregate, aggregate_agglomerative,
                          aggregate_balls, aggregate_best, aggregate_furthest,
                          aggregate_localsearch, correlation_cost, disagreement)
from .graph import (AdjacencyRow, GraphFormatError, MultiRelationGraph, concatenated_row,
                    dump_graph, load_graph, relation_view)
from .holistic import (GreedyPlusSummarizer, HybridSummarizer, KMedianPlusSummarizer,
                       RandomizedPlusSummarizer, TwoStepSummarizer, greedy_plus, hybrid,
                       kmedian_plus, randomized_plus, two_step)
from .io import dump_summary, read_summary, write_summary
from .kmedian import kmedian_cluster
from .kselect import select_k, suggest_k, sweep_k
from .oracle import brute_force_optimal
from .query import classify, degree, neighborhood
from .single import (GreedySummarizer, KMedianSummarizer, RandomizedSummarizer,
                     SWeGSummarizer, greedy_summarize, kmedian_summarize,
                     randomized_summarize, sweg_summarize)
from .storage import all_relations_bundle, storage_bytes
from .summary import (CostBreakdown, Partition, Summary, build_summary,
                      correction_size_formula, cost, l1_reconstruction_error,
                      reconstruct, summarize_with_partition_cost, verify_lossless)

__version__ = "0.1.0"

__all__ = [
    "DistanceOracle", "aggregate", "aggregate_agglomerative", "aggregate_balls",
    "aggregate_best", "aggregate_furthest", "aggregate_localsearch", "correlation_cost",
    "disagreement", "AdjacencyRow", "GraphFormatError", "MultiRelationGraph",
    "concatenated_row", "dump_graph", "load_graph", "relation_view", "GreedyPlusSummarizer",
    "HybridSummarizer", "KMedianPlusSummarizer", "RandomizedPlusSummarizer",
    "TwoStepSummarizer", "greedy_plus", "hybrid", "kmedian_plus", "randomized_plus",
    "two_step", "dump_summary", "read_summary", "write_summary", "kmedian_cluster", "select_k",
    "suggest_k", "sweep_k", "brute_force_optimal", "classify", "degree", "neighborhood",
    "GreedySummarizer", "KMedianSummarizer", "RandomizedSummarizer", "SWeGSummarizer",
    "greedy_summarize", "kmedian_summarize", "randomized_summarize", "sweg_summarize",
    "all_relations_bundle", "storage_bytes", "CostBreakdown", "Partition", "Summary",
    "build_summary", "correction_size_formula", "cost", "l1_reconstruction_error",
    "reconstruct", "summarize_with_partition_cost", "verify_lossless",
]
