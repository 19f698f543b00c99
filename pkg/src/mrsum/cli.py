"""Command-line interface: ``mrsum <command> ...``.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O error.
"""

import argparse
import json
import os
import sys
import time

from .aggregation import AGGREGATORS
from .graph import GRAPH_FORMATS, GraphFormatError, dump_graph, load_graph, relation_view
from .holistic import greedy_plus, hybrid, kmedian_plus, randomized_plus, two_step
from .io import SUMMARY_FORMATS, SummaryFormatError, dump_summary, read_summary
from .kselect import curve_csv, select_k, sweep_k
from .oracle import brute_force_optimal
from .query import classify_costs, neighborhood
from .single import (DEFAULT_SWEG_ITERATIONS, SINGLE_ALGORITHMS, greedy_summarize,
                     kmedian_summarize, randomized_summarize, sweg_summarize)
from .storage import all_relations_bundle, dump_bundle, section_bytes, storage_bytes
from .summary import reconstruct, verify_lossless

__version__ = "0.1.0"

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

ALGORITHMS = ("greedy", "randomized", "sweg", "kmedian", "two-step",
              "greedy+", "randomized+", "kmedian+", "hybrid")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(fields, as_json, out=None):
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(fields, sort_keys=False) + "\n")
    else:
        for k, v in fields.items():
            out.write(f"{k}={v}\n")


def _existing(path):
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    return path


def _load(args):
    return load_graph(_existing(args.input), format=args.format)


def _write_bytes(path, data):
    if path in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _single_view(g, args):
    if args.relation is not None:
        if args.relation not in g.relation_labels:
            raise UsageError(f"unknown relation {args.relation!r}")
        return relation_view(g, g.relation_labels.index(args.relation))
    if g.q != 1:
        raise UsageError(f"--algo {args.algo} needs a single relation; pass --relation")
    return g


def _resolve_k(g, args, required):
    if args.k is not None and args.auto_k:
        raise UsageError("--k and --auto-k are mutually exclusive")
    if args.k is not None:
        if not 1 <= args.k <= g.n:
            raise UsageError(f"--k must lie in [1, {g.n}]")
        return args.k
    if args.auto_k or required:
        return select_k(sweep_k(g, seed=args.seed, n_jobs=args.threads))
    return None


def _run_algorithm(g, args):
    algo, seed = args.algo, args.seed
    params = {"algorithm": algo}
    if algo in ("greedy", "randomized", "sweg", "kmedian"):
        view = _single_view(g, args)
        if algo == "greedy":
            k = _resolve_k(view, args, required=False)
            params["k_target"] = k
            return greedy_summarize(view, k), view, params
        if algo == "randomized":
            params["seed"] = seed
            return randomized_summarize(view, seed), view, params
        if algo == "sweg":
            params.update(T=args.T, seed=seed)
            return sweg_summarize(view, args.T, seed), view, params
        k = _resolve_k(view, args, required=True)
        params.update(k=k, seed=seed)
        return kmedian_summarize(view, k, seed), view, params
    if algo == "two-step":
        k = args.k
        params.update(single=args.single, agg=args.agg, seed=seed)
        if args.agg == "balls":
            params["balls_alpha"] = args.balls_alpha
        if args.agg == "localsearch":
            params["ls_passes"] = args.ls_passes
        s = two_step(g, args.single, args.agg,
                     params={"T": args.T, "k": k, "alpha": args.balls_alpha,
                             "max_passes": args.ls_passes},
                     seed=seed, n_jobs=args.threads)
        return s, g, params
    if algo == "greedy+":
        k = _resolve_k(g, args, required=False)
        params["k_target"] = k
        return greedy_plus(g, k), g, params
    if algo == "randomized+":
        params["seed"] = seed
        return randomized_plus(g, seed), g, params
    if algo == "kmedian+":
        k = _resolve_k(g, args, required=True)
        params.update(k=k, seed=seed)
        return kmedian_plus(g, k, seed), g, params
    k = _resolve_k(g, args, required=False)
    params.update(k_override=k, seed=seed)
    return hybrid(g, k, seed), g, params


def cmd_summarize(args):
    g = _load(args)
    t0 = time.perf_counter()
    s, target, params = _run_algorithm(g, args)
    elapsed = time.perf_counter() - t0
    if args.output:
        _write_bytes(args.output, dump_summary(s, args.summary_format))
    c = s.cost()
    fields = dict(params)
    fields.update(supernodes=s.k, superedges=c.superedge_count, c_plus=c.plus_count,
                  c_minus=c.minus_count, total=c.total, edges=c.n_edges,
                  relative_size=f"{c.relative_size:.6f}", wall_time=f"{elapsed:.4f}")
    _emit(fields, args.json)
    return EXIT_OK


def cmd_reconstruct(args):
    s = read_summary(_existing(args.summary))
    _write_bytes(args.output, dump_graph(reconstruct(s), args.format))
    return EXIT_OK


def cmd_verify(args):
    g = _load(args)
    s = read_summary(_existing(args.summary))
    rep = verify_lossless(g, s)
    _emit({"lossless": str(rep.ok).lower(), "missing": len(rep.missing),
           "extra": len(rep.extra)}, args.json)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_stats(args):
    if args.summary:
        s = read_summary(_existing(args.summary))
        c = s.cost()
        fields = {"nodes": s.n, "relations": s.q, "supernodes": s.k,
                  "superedges": c.superedge_count, "c_plus": c.plus_count,
                  "c_minus": c.minus_count, "total": c.total, "edges": c.n_edges,
                  "relative_size": f"{c.relative_size:.6f}"}
        for fmt in SUMMARY_FORMATS:
            fields[f"bytes_{fmt}"] = storage_bytes(s, fmt)
        for name, b in section_bytes(s).items():
            fields[f"bytes_{name.lower()}"] = b
    elif args.input:
        g = _load(args)
        fields = {"nodes": g.n, "relations": g.q, "edges": g.m}
        for label, cnt in zip(g.relation_labels, g.relation_edge_counts().tolist()):
            fields[f"edges[{label}]"] = cnt
        for fmt in SUMMARY_FORMATS:
            fields[f"bytes_{fmt}"] = storage_bytes(g, fmt)
    else:
        raise UsageError("stats needs --input or --summary")
    _emit(fields, args.json)
    return EXIT_OK


def cmd_query(args):
    s = read_summary(_existing(args.summary))
    try:
        nb = neighborhood(s, args.node)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    rl, nl = s.relation_labels, s.node_labels
    for w, r in sorted(nb.pairs):
        print(f"{nl[w]} {rl[r]}")
    if args.histogram:
        for r in range(s.q):
            print(f"histogram[{rl[r]}]={nb.histogram.get(r, 0)}")
    if args.bench:
        reps = args.bench
        t0 = time.perf_counter()
        for _ in range(reps):
            neighborhood(s, args.node)
        t_summary = time.perf_counter() - t0
        v = nl.index(args.node)
        t0 = time.perf_counter()
        for _ in range(reps):
            e = reconstruct(s).edges
            e[(e[:, 0] == v) | (e[:, 1] == v)]
        t_scan = time.perf_counter() - t0
        print(f"speedup={t_scan / max(t_summary, 1e-12):.2f}")
    return EXIT_OK


def cmd_classify(args):
    g = _load(args)
    cands = []
    for path in args.candidates:
        label = os.path.splitext(os.path.basename(path))[0]
        cands.append((label, read_summary(_existing(path))))
    try:
        costs = classify_costs(g, cands)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for label, total in costs:
        print(f"cost[{label}]={total}")
    best = min(range(len(costs)), key=lambda i: (costs[i][1], i))
    print(f"label={costs[best][0]}")
    return EXIT_OK


def cmd_sweep_k(args):
    g = _load(args)
    try:
        curve = sweep_k(g, args.k_min, args.k_max, args.step, args.seed, n_jobs=args.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write_bytes(args.output, curve_csv(curve).encode())
    if args.output not in (None, "-"):
        print(f"seed={args.seed}")
        print(f"selected_k={select_k(curve)}")
    return EXIT_OK


def cmd_bundle_all(args):
    g = _load(args)
    bundle = all_relations_bundle(g, args.k, args.seed)
    if args.output:
        _write_bytes(args.output, dump_bundle(bundle, args.summary_format))
    fields = {"seed": args.seed, "summaries": len(bundle),
              "total": sum(s.cost().total for s in bundle)}
    for fmt in SUMMARY_FORMATS:
        fields[f"bytes_{fmt}"] = storage_bytes(bundle, fmt)
    fields["bytes_mapping"] = section_bytes(bundle)["MAPPING"]
    _emit(fields, args.json)
    return EXIT_OK


def cmd_oracle(args):
    g = _load(args)
    try:
        p, c = brute_force_optimal(g, args.k, args.objective)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    blocks = "|".join(",".join(g.node_labels[i] for i in sorted(b)) for b in p.blocks())
    _emit({"partition": blocks, "supernodes": p.k, "total": c.total,
           "relative_size": f"{c.relative_size:.6f}"}, args.json)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="mrsum", description="Lossless summaries of multi-relation graphs.")
    parser.add_argument("--version", action="version", version=f"mrsum {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_args(p, required=True):
        p.add_argument("--input", "-i", required=required, help="graph file")
        p.add_argument("--format", choices=GRAPH_FORMATS, default="triples")

    def common(p):
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("summarize", help="summarize a graph")
    graph_args(p)
    common(p)
    p.add_argument("--algo", choices=ALGORITHMS, default="hybrid")
    p.add_argument("--single", choices=SINGLE_ALGORITHMS, default="greedy")
    p.add_argument("--agg", choices=AGGREGATORS, default="furthest")
    p.add_argument("--balls-alpha", type=float, default=0.25)
    p.add_argument("--ls-passes", type=int, default=50)
    p.add_argument("--T", type=int, default=DEFAULT_SWEG_ITERATIONS)
    p.add_argument("--k", type=int)
    p.add_argument("--auto-k", action="store_true")
    p.add_argument("--relation", help="relation label for single-relation algorithms")
    p.add_argument("--output", "-o", help="summary file to write")
    p.add_argument("--summary-format", choices=SUMMARY_FORMATS, default="plain")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("reconstruct", help="rebuild a graph from a summary")
    p.add_argument("--summary", "-s", required=True)
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=GRAPH_FORMATS, default="triples")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="check that a summary reproduces a graph")
    graph_args(p)
    p.add_argument("--summary", "-s", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="counts and storage of a graph or summary")
    graph_args(p, required=False)
    p.add_argument("--summary", "-s")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("query", help="queries answered on a summary")
    qsub = p.add_subparsers(dest="query", required=True, parser_class=_Parser)
    q = qsub.add_parser("neighborhood")
    q.add_argument("--summary", "-s", required=True)
    q.add_argument("--node", required=True)
    q.add_argument("--histogram", action="store_true")
    q.add_argument("--bench", type=int, nargs="?", const=100, default=0,
                   help="time N queries against reconstruct-and-scan")
    q.set_defaults(func=cmd_query)

    p = sub.add_parser("classify", help="label a graph by the cheapest candidate summary")
    graph_args(p)
    p.add_argument("--candidates", nargs="+", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep-k", help="relative size of k-Median+ over a range of k")
    graph_args(p)
    common(p)
    p.add_argument("--k-min", type=int)
    p.add_argument("--k-max", type=int)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_sweep_k)

    p = sub.add_parser("bundle-all", help="independent k-Median summary per relation")
    graph_args(p)
    common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--output", "-o")
    p.add_argument("--summary-format", choices=SUMMARY_FORMATS, default="plain")
    p.set_defaults(func=cmd_bundle_all)

    p = sub.add_parser("oracle", help="exhaustive optimum for tiny graphs")
    graph_args(p)
    p.add_argument("--k", type=int)
    p.add_argument("--objective", choices=("cost", "corrections"), default="cost")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mrsum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, SummaryFormatError, UnicodeDecodeError, OSError) as exc:
        print(f"mrsum: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
