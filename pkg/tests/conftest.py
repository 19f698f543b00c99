import numpy as np
import pytest

from mrsum.graph import MultiRelationGraph

SHARED = [("a", "b"), ("a", "d"), ("c", "b"), ("c", "d")]


def three_relation_triples():
    """Five nodes, three relations, 16 edges; {a,c}, {b,d}, {e} is exact."""
    t = [(u, v, r) for r in ("r1", "r2", "r3") for u, v in SHARED]
    t += [("a", "c", "r1"), ("b", "d", "r2"), ("b", "e", "r3"), ("d", "e", "r3")]
    return t


def random_graph(n, q, density, seed):
    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, 1)
    parts = []
    for r in range(q):
        keep = rng.random(len(iu)) < density
        parts.append(np.stack([iu[keep], iv[keep], np.full(keep.sum(), r)], axis=1))
    edges = np.concatenate(parts) if parts else np.zeros((0, 3), dtype=np.int64)
    return MultiRelationGraph(n, q, edges)


def planted_graph(blocks, q, p_in, p_out, seed):
    """Random graph whose edge probability depends on the block pair."""
    rng = np.random.default_rng(seed)
    lab = np.concatenate([[b] * s for b, s in enumerate(blocks)])
    n = len(lab)
    iu, iv = np.triu_indices(n, 1)
    same = lab[iu] == lab[iv]
    parts = []
    for r in range(q):
        keep = rng.random(len(iu)) < np.where(same, p_in, p_out)
        parts.append(np.stack([iu[keep], iv[keep], np.full(keep.sum(), r)], axis=1))
    return MultiRelationGraph(n, q, np.concatenate(parts))


def single(edges):
    return MultiRelationGraph.from_triples([(u, v, "r") for u, v in edges])


@pytest.fixture
def trio():
    return MultiRelationGraph.from_triples(three_relation_triples())


@pytest.fixture
def k4_minus_one():
    # K4 without b-d
    return single([("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("c", "d")])


@pytest.fixture
def k4():
    return single([("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")])


@pytest.fixture
def star5():
    return single([("a", "b"), ("a", "c"), ("a", "d"), ("a", "e")])


def blocks_by_label(g, p):
    """Partition as a set of frozensets of node labels."""
    return {frozenset(g.node_labels[i] for i in b) for b in p.blocks()}
