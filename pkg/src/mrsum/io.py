"""Text serialization of summaries.

A summary file has five sections, each introduced by a header line::

    [MAPPING]      node supernode      (one line per node, node order)
    [RELATIONS]    relation            (one line per relation, index order)
    [SUPEREDGES]   U W relation
    [CPLUS]        u v relation
    [CMINUS]       u v relation

Lines within a section are sorted by index, so a summary has exactly one
serialization.  In the ``relation-list`` layout, entries sharing the same
endpoints are folded into one line with comma-separated relations.
"""

from collections import defaultdict

from .graph import _open_text
from .summary import Partition, Summary

__all__ = ["SUMMARY_FORMATS", "SECTIONS", "SummaryFormatError", "summary_sections",
           "write_summary", "dump_summary", "read_summary", "load_summary"]

SUMMARY_FORMATS = ("plain", "relation-list")
SECTIONS = ("MAPPING", "RELATIONS", "SUPEREDGES", "CPLUS", "CMINUS")


class SummaryFormatError(ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


def _triple_lines(triples, left, right, rel, fmt):
    if fmt == "plain":
        return [f"{left[a]} {right[b]} {rel[r]}" for a, b, r in triples]
    grouped = defaultdict(list)
    for a, b, r in triples:
        grouped[(a, b)].append(r)
    return [f"{left[a]} {right[b]} {','.join(rel[r] for r in rs)}"
            for (a, b), rs in sorted(grouped.items())]


def summary_sections(s, format="plain"):
    """Mapping from section name to its body lines."""
    if format not in SUMMARY_FORMATS:
        raise ValueError(f"unknown summary format {format!r}")
    nl, rl = s.node_labels, s.relation_labels
    ids = [str(i) for i in range(s.k)]
    return {
        "MAPPING": [f"{x} {b}" for x, b in zip(nl, s.partition.labels.tolist())],
        "RELATIONS": list(rl),
        "SUPEREDGES": _triple_lines(s.superedges, ids, ids, rl, format),
        "CPLUS": _triple_lines(s.c_plus, nl, nl, rl, format),
        "CMINUS": _triple_lines(s.c_minus, nl, nl, rl, format),
    }


def dump_summary(s, format="plain", include_mapping=True):
    """UTF-8 bytes of the serialized summary."""
    out = []
    for name, lines in summary_sections(s, format).items():
        if name == "MAPPING" and not include_mapping:
            continue
        out.append(f"[{name}]\n")
        out.extend(line + "\n" for line in lines)
    return "".join(out).encode("utf-8")


def write_summary(s, path, format="plain"):
    data = dump_summary(s, format)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def _relations(token, rel_index, lineno):
    if token in rel_index:
        return [rel_index[token]]
    out = []
    for t in token.split(","):
        if t not in rel_index:
            raise SummaryFormatError(f"unknown relation {t!r}", lineno)
        out.append(rel_index[t])
    return out


def read_summary(source):
    """Parse a summary from a path, bytes or stream (either layout)."""
    body = {name: [] for name in SECTIONS}
    current = None
    for lineno, line in enumerate(_open_text(source), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            if current not in body:
                raise SummaryFormatError(f"unknown section {line}", lineno)
            continue
        if current is None:
            raise SummaryFormatError("content before the first section", lineno)
        body[current].append((lineno, line))

    node_labels, blocks = [], []
    for lineno, line in body["MAPPING"]:
        parts = line.split()
        if len(parts) != 2 or not parts[1].lstrip("-").isdigit():
            raise SummaryFormatError("expected 'node supernode'", lineno)
        node_labels.append(parts[0])
        blocks.append(int(parts[1]))
    node_index = {x: i for i, x in enumerate(node_labels)}
    if len(node_index) != len(node_labels):
        raise SummaryFormatError("duplicate node in mapping")
    rel_labels = [line for _, line in body["RELATIONS"]]
    rel_index = {x: i for i, x in enumerate(rel_labels)}
    partition = Partition(blocks)
    if blocks and list(partition.labels) != blocks:
        raise SummaryFormatError("supernode ids are not canonical")

    def triples(section, lookup, what):
        out = []
        for lineno, line in body[section]:
            parts = line.split()
            if len(parts) != 3:
                raise SummaryFormatError("expected 3 fields", lineno)
            try:
                a, b = lookup(parts[0]), lookup(parts[1])
            except (KeyError, ValueError):
                raise SummaryFormatError(f"unknown {what} in {line!r}", lineno) from None
            for r in _relations(parts[2], rel_index, lineno):
                out.append((a, b, r))
        return tuple(sorted(out))

    def supernode(tok):
        i = int(tok)
        if not 0 <= i < partition.k:
            raise KeyError(tok)
        return i

    superedges = triples("SUPEREDGES", supernode, "supernode")
    c_plus = triples("CPLUS", node_index.__getitem__, "node")
    c_minus = triples("CMINUS", node_index.__getitem__, "node")
    return Summary(partition=partition, superedges=superedges, c_plus=c_plus,
                   c_minus=c_minus, node_labels=tuple(node_labels),
                   relation_labels=tuple(rel_labels))


load_summary = read_summary
