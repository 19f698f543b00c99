"""Exact byte accounting for graphs, summaries and per-relation bundles."""

from .graph import MultiRelationGraph, dump_graph, relation_view
from .io import SUMMARY_FORMATS, dump_summary, summary_sections
from .single import greedy_partition, kmedian_summarize
from .summary import Summary
from .utils.validation import check_graph, check_rng

__all__ = ["storage_bytes", "section_bytes", "predicted_summary_bytes",
           "RelationBundle", "all_relations_bundle", "dump_bundle"]

_GRAPH_FORMAT = {"plain": "triples", "relation-list": "relation-list",
                 "triples": "triples"}


class RelationBundle(tuple):
    """One independently built summary per relation, each with its own mapping."""

    __slots__ = ()

    @property
    def relation_labels(self):
        return tuple(s.relation_labels[0] for s in self)


def dump_bundle(bundle, format="plain", include_mapping=True):
    parts = []
    for s in bundle:
        parts.append(f"[BUNDLE {s.relation_labels[0]}]\n".encode("utf-8"))
        parts.append(dump_summary(s, format, include_mapping))
    return b"".join(parts)


def storage_bytes(obj, format="plain", include_mapping=True):
    """Serialized size in bytes of a graph, a summary or a bundle."""
    if format not in SUMMARY_FORMATS:
        raise ValueError(f"unknown storage format {format!r}")
    if isinstance(obj, MultiRelationGraph):
        return len(dump_graph(obj, _GRAPH_FORMAT[format]))
    if isinstance(obj, Summary):
        return len(dump_summary(obj, format, include_mapping))
    if isinstance(obj, RelationBundle):
        return len(dump_bundle(obj, format, include_mapping))
    raise TypeError(f"cannot account storage for {type(obj).__name__}")


def section_bytes(obj, format="plain"):
    """Bytes per section (header line included); bundles sum over members."""
    if isinstance(obj, RelationBundle):
        total = {}
        for s in obj:
            for k, v in section_bytes(s, format).items():
                total[k] = total.get(k, 0) + v
        return total
    out = {}
    for name, lines in summary_sections(obj, format).items():
        out[name] = len(f"[{name}]\n".encode()) + sum(len(x.encode()) + 1 for x in lines)
    return out


def _width(i):
    return len(str(i))


def predicted_summary_bytes(s, include_mapping=True):
    """Plain-layout size derived from label lengths and entry counts alone."""
    nl = [len(x.encode()) for x in s.node_labels]
    rl = [len(x.encode()) for x in s.relation_labels]
    total = sum(len(f"[{name}]\n") for name in ("RELATIONS", "SUPEREDGES", "CPLUS", "CMINUS"))
    if include_mapping:
        total += len("[MAPPING]\n")
        total += sum(nl[i] + 1 + _width(b) + 1 for i, b in enumerate(s.partition.labels.tolist()))
    total += sum(x + 1 for x in rl)
    total += sum(_width(U) + _width(W) + rl[r] + 3 for U, W, r in s.superedges)
    for corr in (s.c_plus, s.c_minus):
        total += sum(nl[u] + nl[v] + rl[r] + 3 for u, v, r in corr)
    return total


def all_relations_bundle(g, k=None, seed=None, n_init=5):
    """k-Median summary of every relation on its own.

    ``k`` may be one int for all relations, a per-relation sequence, or
    ``None`` to use each relation's Greedy supernode count.
    """
    check_graph(g)
    rng = check_rng(seed)
    out = []
    for r in range(g.q):
        view = relation_view(g, r)
        if k is None:
            kr = greedy_partition(view).k
        elif isinstance(k, (list, tuple)):
            kr = k[r]
        else:
            kr = k
        out.append(kmedian_summarize(view, min(int(kr), g.n), rng, n_init))
    return RelationBundle(out)
