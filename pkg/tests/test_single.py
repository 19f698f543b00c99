from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrsum import _engine
from mrsum.graph import MultiRelationGraph, relation_view
from mrsum.kmedian import kmedian_cluster, kmedian_objective
from mrsum.oracle import brute_force_optimal
from mrsum.single import (GreedySummarizer, KMedianSummarizer, RandomizedSummarizer,
                          SWeGSummarizer, greedy_partition, greedy_summarize,
                          kmedian_summarize, randomized_summarize, sweg_summarize)
from mrsum.summary import Partition, build_summary, verify_lossless

from conftest import blocks_by_label, random_graph, single


def two_cliques(size=4):
    left = [f"l{i}" for i in range(size)]
    right = [f"r{i}" for i in range(size)]
    edges = [(x, y) for grp in (left, right) for i, x in enumerate(grp) for y in grp[i + 1:]]
    return single(edges)


# Greedy --------------------------------------------------------------------

def test_greedy_on_k4_minus_edge(k4_minus_one):
    s = greedy_summarize(k4_minus_one)
    c = s.cost()
    assert (c.superedge_count, c.corrections, c.total) == (1, 1, 2)
    assert s.k == 1


def test_greedy_last_merge_has_positive_reduction_but_same_cost(k4_minus_one):
    g = k4_minus_one
    _, trace = _engine.greedy_merge(g)
    assert [t[2] for t in trace] == [Fraction(1, 2), Fraction(1, 2), Fraction(1, 3)]
    before = Partition.from_blocks([trace[-1][0], trace[-1][1]], g.n)
    assert build_summary(g, before).cost().total == 2
    assert greedy_summarize(g).cost().total == 2


def test_greedy_clique(k4):
    s = greedy_summarize(k4)
    assert s.k == 1 and s.cost().total == 1


def test_greedy_k_target_n_is_identity(k4):
    s = greedy_summarize(k4, k_target=4)
    assert s.partition == Partition.identity(4)
    assert s.cost().total == k4.m


def test_greedy_k_target_forces_merges(star5):
    # greedy alone stops above one supernode; forcing reaches the target
    free = greedy_partition(star5)
    for k in range(1, free.k + 1):
        assert greedy_partition(star5, k_target=k).k == k


def test_greedy_k_target_stops_early():
    g = random_graph(15, 1, 0.3, 0)
    free = greedy_partition(g).k
    target = min(free + 3, g.n)
    assert greedy_partition(g, k_target=target).k == target


@pytest.mark.parametrize("k", [0, 6, 2.5])
def test_greedy_k_target_validation(star5, k):
    with pytest.raises((ValueError, TypeError)):
        greedy_summarize(star5, k_target=k)


def test_single_relation_required(trio):
    with pytest.raises(ValueError):
        greedy_summarize(trio)
    with pytest.raises(TypeError):
        greedy_summarize("not a graph")


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 7), density=st.floats(0.1, 0.9), seed=st.integers(0, 10**6))
def test_greedy_never_beats_exhaustive_optimum(n, density, seed):
    g = random_graph(n, 1, density, seed)
    _, best = brute_force_optimal(g)
    assert greedy_summarize(g).cost().total >= best.total


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 20), q=st.integers(1, 3), density=st.sampled_from([0.05, 0.2, 0.5]),
       seed=st.integers(0, 10**6))
def test_traced_reductions_match_scratch_costs(n, q, density, seed):
    g = random_graph(n, q, density, seed)
    p, trace = _engine.greedy_merge(g)
    labels = np.arange(n)
    for left, right, frac, forced in trace:
        assert not forced and frac > 0
        st_ = _engine.MergeState(g, Partition(labels))
        u, w = min(left), min(right)
        cu, cw = st_.row_cost(u), st_.row_cost(w)
        labels = labels.copy()
        labels[right] = labels[u]
        merged = _engine.MergeState(g, Partition(labels))
        ch = merged.row_cost(min(u, w))
        assert frac == Fraction(cu + cw - ch, cu + cw)
    assert build_summary(g, p).cost().total <= g.m


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 25), q=st.integers(1, 3), density=st.sampled_from([0.1, 0.3, 0.6]),
       seed=st.integers(0, 10**6))
def test_incremental_state_matches_recomputation(n, q, density, seed):
    g = random_graph(n, q, density, seed)
    state = _engine.MergeState(g)
    index = _engine._GreedyIndex(state)
    rng = np.random.default_rng(seed)
    while state.k > 1:
        alive = np.flatnonzero(state.alive)
        fresh = _engine.MergeState(g, state.partition())
        assert np.array_equal(state.C[alive], fresh.C[np.flatnonzero(fresh.alive)])
        assert np.array_equal(state.A[np.ix_(alive, alive)],
                              fresh.A[np.ix_(np.flatnonzero(fresh.alive), np.flatnonzero(fresh.alive))])
        x = int(alive[0])
        ys = alive[1:]
        assert np.array_equal(index.M[x, ys], state.merged_cost(x, ys))
        u, w = rng.choice(alive, 2, replace=False)
        index.merge(int(u), int(w))


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 30), q=st.integers(1, 4), density=st.floats(0, 1), seed=st.integers(0, 10**6))
def test_singleton_index_fill_matches_merged_cost(n, q, density, seed):
    g = random_graph(n, q, density, seed)
    index = _engine._GreedyIndex(_engine.MergeState(g))
    nodes = np.arange(n)
    for x in range(n):
        ys = nodes[nodes != x]
        assert np.array_equal(index.M[x, ys], index.st.merged_cost(x, ys))


def test_merged_cost_matches_merged_state():
    g = random_graph(10, 2, 0.4, 5)
    p = Partition([0, 0, 1, 2, 2, 3, 4, 4, 4, 5])
    state = _engine.MergeState(g, p)
    alive = np.flatnonzero(state.alive)
    for x in alive:
        for y in alive:
            if x == y:
                continue
            lab = p.labels.copy()
            lab[lab == p.labels[y]] = p.labels[x]
            merged = _engine.MergeState(g, Partition(lab))
            assert state.merged_cost(x, [y])[0] == merged.C[min(x, y)]


# Randomized ----------------------------------------------------------------

@pytest.mark.parametrize("seed", range(5))
def test_randomized_on_k4_minus_edge(k4_minus_one, seed):
    assert randomized_summarize(k4_minus_one, seed).cost().total == 2


def test_randomized_edgeless():
    g = MultiRelationGraph(6, 1)
    s = randomized_summarize(g, 0)
    assert s.partition == Partition.identity(6) and s.cost().total == 0


def test_randomized_seed_determinism():
    g = random_graph(40, 1, 0.15, 9)
    a = randomized_summarize(g, 123)
    b = randomized_summarize(g, 123)
    assert a.partition == b.partition and a.superedges == b.superedges


# SWeG ----------------------------------------------------------------------

def test_sweg_two_cliques():
    g = two_cliques()
    s = sweg_summarize(g, T=5, seed=0)
    assert s.k == 2 and s.cost().total == 2
    assert blocks_by_label(g, s.partition) == {frozenset(f"l{i}" for i in range(4)),
                                               frozenset(f"r{i}" for i in range(4))}


@pytest.mark.parametrize("T", [0, -1, 1.5])
def test_sweg_rejects_bad_iterations(k4, T):
    with pytest.raises(ValueError):
        sweg_summarize(k4, T=T)


def test_identical_neighborhoods_share_shingle():
    # b and c both see exactly {a, d}, plus each other
    g = single([("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("b", "c"), ("d", "e")])
    b, c = g.node_index("b"), g.node_index("c")
    rng = np.random.default_rng(0)
    for _ in range(200):
        h = rng.permutation(g.n) + 1
        f = _engine.shingles(g, h)
        assert f[b] == f[c]


def test_shingle_collision_rate_is_jaccard():
    g = single([("a", "b"), ("a", "c"), ("a", "d"), ("b", "e"), ("c", "f"), ("d", "f"),
                ("e", "f"), ("b", "g")])
    closed = [set(g.neighbors(u, 0).tolist()) | {u} for u in range(g.n)]
    rng = np.random.default_rng(2024)
    trials = 10_000
    hits = np.zeros((g.n, g.n))
    for _ in range(trials):
        f = _engine.shingles(g, rng.permutation(g.n) + 1)
        hits += f[:, None] == f[None, :]
    for u in range(g.n):
        for w in range(u + 1, g.n):
            jac = len(closed[u] & closed[w]) / len(closed[u] | closed[w])
            sigma = np.sqrt(jac * (1 - jac) / trials)
            assert abs(hits[u, w] / trials - jac) <= 3 * sigma + 1e-12


# k-median ------------------------------------------------------------------

def test_kmedian_k_equals_n():
    X = np.random.default_rng(0).integers(0, 2, (6, 9))
    p = kmedian_cluster(X, 6, seed=1)
    assert p == Partition.identity(6)
    assert kmedian_objective(X, p.labels) == 0


def test_kmedian_identical_groups():
    X = np.array([[1, 1, 0, 0]] * 3 + [[0, 0, 1, 1]] * 4)
    for seed in range(5):
        p = kmedian_cluster(X, 2, seed=seed)
        assert p.blocks() == [{0, 1, 2}, {3, 4, 5, 6}]


def test_kmedian_exactly_k_clusters_with_duplicates():
    X = np.array([[1, 0]] * 5 + [[0, 1]])
    for k in range(1, 7):
        assert kmedian_cluster(X, k, seed=k).k == k


def test_kmedian_median_ties_go_to_zero():
    X = np.array([[1, 0], [0, 1]])
    assert kmedian_objective(X, [0, 0]) == 2  # center (0, 0)


@pytest.mark.parametrize("k", [0, 4, 1.0])
def test_kmedian_k_range(k):
    with pytest.raises((ValueError, TypeError)):
        kmedian_cluster(np.zeros((3, 3), dtype=np.uint8), k)


def test_kmedian_rejects_non_binary():
    with pytest.raises(ValueError):
        kmedian_cluster(np.array([[2, 0], [0, 1]]), 1)


def test_kmedian_accepts_adjacency_rows(trio):
    from mrsum.graph import concatenated_row
    rows = [concatenated_row(trio, u) for u in range(trio.n)]
    assert kmedian_cluster(rows, 3, seed=0) == kmedian_cluster(trio.concatenated_matrix(), 3, seed=0)


def test_kmedian_star(star5):
    s = kmedian_summarize(star5, 2, seed=0)
    assert blocks_by_label(star5, s.partition) == {frozenset("a"), frozenset("bcde")}
    assert s.cost().total == 1


def test_kmedian_clique_single_block(k4):
    assert kmedian_summarize(k4, 1, seed=0).cost().total == 1


def test_kmedian_seed_determinism():
    g = random_graph(30, 1, 0.2, 4)
    a = kmedian_summarize(g, 7, seed=99)
    b = kmedian_summarize(g, 7, seed=99)
    assert a.partition == b.partition


def test_kmedian_improves_with_restarts():
    X = np.random.default_rng(3).integers(0, 2, (25, 12))
    one = kmedian_objective(X, kmedian_cluster(X, 4, seed=0, n_init=1).labels)
    many = kmedian_objective(X, kmedian_cluster(X, 4, seed=0, n_init=8).labels)
    assert many <= one


# all four ------------------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 30), q=st.integers(1, 3), density=st.sampled_from([0.02, 0.1, 0.3]),
       seed=st.integers(0, 10**6))
def test_single_relation_outputs_are_lossless(n, q, density, seed):
    g = random_graph(n, q, density, seed)
    for r in range(q):
        view = relation_view(g, r)
        for s in (greedy_summarize(view), randomized_summarize(view, seed),
                  sweg_summarize(view, 3, seed), kmedian_summarize(view, max(1, n // 3), seed)):
            assert verify_lossless(view, s)


def test_estimators(k4_minus_one):
    for est in (GreedySummarizer(), RandomizedSummarizer(seed=1), SWeGSummarizer(T=2, seed=1),
                KMedianSummarizer(k=2, seed=1)):
        labels = est.fit_predict(k4_minus_one)
        assert len(labels) == 4
        assert est.cost_.total == est.summary_.cost().total
        assert est.n_supernodes_ == est.summary_.k
        assert est.score(k4_minus_one) == -est.cost_.relative_size
        assert est.get_params() == type(est)(**est.get_params()).get_params()
    assert KMedianSummarizer(k=3).set_params(k=2).k == 2
