"""Command-line driver: ``maxrank {rank,core,compare,sweep,toplist,synth}``.

Every flag can also be set through an environment variable named
``MAXRANK_`` + the flag in upper case with dashes turned into underscores
(``--max-iters`` -> ``MAXRANK_MAX_ITERS``).  Command-line flags win.

Exit codes: 0 success, 1 bad input or usage, 2 solver hit ``--max-iters``
without converging.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, compare, oracle, report, synth
from .graph import GraphError, IngestOptions, open_text, parse_edge_list
from .ranker import RankError, RankParams, RankResult, solve

ENV_PREFIX = "MAXRANK_"
EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED = 0, 1, 2


class CLIError(Exception):
    pass


def _env(flag: str, default):
    return os.environ.get(ENV_PREFIX + flag.lstrip("-").upper().replace("-", "_"), default)


def _floats(text: str) -> list[float]:
    return [float(x) for x in str(text).split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in str(text).split(",") if x.strip()]


def _add(p: argparse.ArgumentParser, flag: str, default=None, **kw):
    p.add_argument(flag, default=_env(flag, default), **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxrank", description="PageRank and MaxRank link analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p, multi_lambda=False):
        _add(p, "--input", help="edge list (plain or .gz)")
        if multi_lambda:
            _add(p, "--lambdas", "0.1,0.5,0.9", type=_floats,
                 help="comma-separated lambda values")
        else:
            _add(p, "--lambda", 0.0, type=float, dest="lam")
        _add(p, "--damping", 0.85, type=float)
        _add(p, "--tol", 1e-10, type=float)
        _add(p, "--max-iters", 1000, type=int)
        _add(p, "--teleport", "uniform", help="'uniform' or CSV file id,probability")
        _add(p, "--out", ".", help="output directory")
        _add(p, "--format", "csv", choices=("csv", "json"))
        _add(p, "--threads", os.cpu_count() or 1, type=int)
        _add(p, "--keep-self-loops", False, action="store_true")

    p = sub.add_parser("rank", help="solve for one lambda and write scores")
    solver_flags(p)

    p = sub.add_parser("core", help="best-backlink core and influence measures")
    solver_flags(p)
    _add(p, "--bins", 50, type=int)

    p = sub.add_parser("compare", help="top-k agreement of MaxRank with PageRank")
    solver_flags(p, multi_lambda=True)
    _add(p, "--top-k", ",".join(map(str, compare.DEFAULT_SCHEDULE)), type=_ints)

    p = sub.add_parser("sweep", help="core size as a function of lambda")
    solver_flags(p, multi_lambda=True)

    p = sub.add_parser("toplist", help="print the top-k pages with best backlinks")
    solver_flags(p)
    _add(p, "--top-k", "50", type=_ints)

    p = sub.add_parser("synth", help="write a seeded synthetic edge list")
    _add(p, "--generator", "preferential_attachment", choices=synth.GENERATORS)
    _add(p, "--nodes", 1000, type=int)
    _add(p, "--param", 3.0, type=float, help="m for preferential_attachment, p for erdos_renyi")
    _add(p, "--seed", 0, type=int)
    _add(p, "--out", "-", help="edge-list path, '-' for stdout")

    p = sub.add_parser("oracle", help=argparse.SUPPRESS)
    _add(p, "--input")
    _add(p, "--lambda", 0.0, type=float, dest="lam")
    _add(p, "--damping", 0.85, type=float)
    return parser


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    return str(text).lower() in ("1", "true", "yes", "on")


def load_graph(args):
    if not args.input:
        raise CLIError("--input is required")
    path = Path(args.input)
    if not path.is_file():
        raise CLIError(f"input file not found: {path}")
    opts = IngestOptions(drop_self_loops=not _bool(getattr(args, "keep_self_loops", False)))
    with open_text(path) as fh:
        return parse_edge_list(fh, opts)


def load_teleport(source: str, g) -> np.ndarray | None:
    if source in (None, "", "uniform"):
        return None
    path = Path(source)
    if not path.is_file():
        raise CLIError(f"teleport file not found: {path}")
    v = np.zeros(g.node_count)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#") or line.lower().startswith("id,"):
                continue
            try:
                i, prob = line.split(",")
                i, prob = int(i), float(prob)
            except ValueError:
                raise CLIError(f"{path}:{lineno}: expected 'id,probability'") from None
            if not 0 <= i < g.node_count:
                raise CLIError(f"{path}:{lineno}: node id {i} out of range")
            if not prob >= 0:
                raise CLIError(f"{path}:{lineno}: negative probability")
            v[i] = prob
    total = math.fsum(v)
    if abs(total - 1.0) > 1e-9:
        raise CLIError(f"teleport probabilities sum to {total!r}, not 1")
    return v / total


def effective_config(args) -> dict:
    """Flags that determine the artifacts' content.

    ``--threads`` and ``--out`` are left out: neither changes the numbers.
    """
    cfg = {k: v for k, v in vars(args).items() if k not in ("threads", "out")}
    if "lam" in cfg:
        cfg["lambda"] = cfg.pop("lam")
    return cfg


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _solve(args, g, lam) -> RankResult:
    params = RankParams(c=args.damping, lam=lam, teleport=load_teleport(args.teleport, g),
                        tol=args.tol, max_iters=args.max_iters)
    return solve(g, params, threads=args.threads)


def cmd_rank(args) -> int:
    g = load_graph(args)
    res = _solve(args, g, args.lam)
    out = _outdir(args)
    cfg = effective_config(args)
    if args.format == "json":
        with open(out / "scores.json", "w", encoding="utf-8") as fh:
            report.dump_json(report.scores_json(g, res, cfg), fh)
    else:
        with open(out / "scores.csv", "w", encoding="utf-8") as fh:
            report.write_scores_csv(fh, g, res, cfg)
    with open(out / "trace.csv", "w", encoding="utf-8") as fh:
        report.write_trace_csv(fh, res, cfg)
    status = "converged" if res.converged else "NOT converged"
    print(f"iterations={res.iterations} {status} sum={res.total!r}")
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def cmd_core(args) -> int:
    g = load_graph(args)
    res = _solve(args, g, args.lam)
    stats = analysis.core_stats(g, res)
    prof = analysis.influenced_ratios(g, res)
    out = _outdir(args)
    cfg = effective_config(args)
    with open(out / "core.json", "w", encoding="utf-8") as fh:
        report.dump_json(report.core_json(stats, cfg), fh)
    with open(out / "core.csv", "w", encoding="utf-8") as fh:
        report.write_core_csv(fh, g, res, stats, cfg)
    with open(out / "influence.csv", "w", encoding="utf-8") as fh:
        report.write_influence_csv(fh, g, res, prof, cfg)
    if stats.core_size:
        for name, values in (("tbb_hist.csv", stats.tbb),
                             ("outdeg_hist.csv", g.out_degree[stats.core])):
            with open(out / name, "w", encoding="utf-8") as fh:
                report.write_pairs_csv(fh, ("bin_center", "frequency"),
                                       analysis.loglog_histogram(values, args.bins), cfg)
        with open(out / "tbb_ratio_sorted.csv", "w", encoding="utf-8") as fh:
            report.write_pairs_csv(fh, ("position", "tbb_ratio"),
                                   enumerate(map(float, np.sort(stats.tbb_ratio)), 1), cfg)
    for lo, hi in ((1, 100), (101, 1000), (1001, 10000)):
        if lo > g.node_count:
            break
        hi = min(hi, g.node_count)
        with open(out / f"tbb_vs_outdeg_{lo}_{hi}.csv", "w", encoding="utf-8") as fh:
            report.write_pairs_csv(fh, ("out_degree", "tbb"),
                                   analysis.tbb_vs_outdegree(g, res, (lo, hi)), cfg)
    s = stats.summary()
    print(" ".join(f"{k}={v}" for k, v in s.items()))
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def cmd_sweep(args) -> int:
    g = load_graph(args)
    rows, ok = [], True
    for lam in args.lambdas:
        res = _solve(args, g, lam)
        ok &= res.converged
        rows.append((float(lam), analysis.core_stats(g, res).core_size))
    with open(_outdir(args) / "core_sizes.csv", "w", encoding="utf-8") as fh:
        report.write_pairs_csv(fh, ("lambda", "core_size"), rows, effective_config(args))
    for lam, size in rows:
        print(f"lambda={lam:g} core_size={size}")
    return EXIT_OK if ok else EXIT_NOT_CONVERGED


def cmd_compare(args) -> int:
    g = load_graph(args)
    ref = _solve(args, g, 0.0)
    ok = ref.converged
    results = []
    for lam in args.lambdas:
        cand = ref if lam == 0 else _solve(args, g, lam)
        ok &= cand.converged
        cmp = compare.compare(ref, cand, args.top_k,
                              candidate_name=f"maxrank(lambda={lam:g})")
        cmp.lam = float(lam)
        cmp.params = cand.params.as_dict()
        results.append(cmp)
    out = _outdir(args)
    cfg = effective_config(args)
    if args.format == "json":
        with open(out / "compare.json", "w", encoding="utf-8") as fh:
            report.dump_json(report.comparison_json(results, cfg), fh)
    else:
        with open(out / "compare.csv", "w", encoding="utf-8") as fh:
            report.write_comparison_csv(fh, results, cfg)
    for cmp in results:
        mc, mt = cmp.means()
        print(f"lambda={cmp.lam:g} mean_c_k={mc:.4f} mean_tau_k={mt:.4f}")
    return EXIT_OK if ok else EXIT_NOT_CONVERGED


def cmd_toplist(args) -> int:
    g = load_graph(args)
    res = _solve(args, g, args.lam)
    k = min(args.top_k[0], g.node_count)
    rows = []
    for rank, i in enumerate(res.order()[:k], start=1):
        b = int(res.best_backlink[i])
        rows.append((rank, g.label(i), repr(float(res.scores[i])),
                     g.label(b) if b >= 0 else ""))
    with open(_outdir(args) / "toplist.csv", "w", encoding="utf-8") as fh:
        report.write_pairs_csv(fh, ("rank", "page", "score", "best_backlink"), rows,
                               effective_config(args))
    width = max(len(r[1]) for r in rows)
    print(f"{'Rank':>4}  {'Page':<{width}}  {'Score':>10}  Best backlink")
    for rank, page, score, best in rows:
        print(f"{rank:>4}  {page:<{width}}  {float(score):>10.6f}  {best}")
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def cmd_synth(args) -> int:
    try:
        g = synth.generate(args.generator, args.nodes, args.param, args.seed)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    cfg = json.dumps(effective_config(args), sort_keys=True)
    lines = [f"# config: {cfg}\n", f"# nodes={g.node_count} edges={g.edge_count}\n"]
    # nodes without any link cannot be expressed in an edge list and are lost
    lines += [f"{s}\t{d}\n" for s, d in g.edges()]
    text = "".join(lines)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = load_graph(args)
    dg = oracle.DenseGraph.build(g, args.damping)
    if args.lam == 0:
        R = oracle.oracle_pagerank(dg)
    else:
        R = oracle.oracle_maxrank(dg.L, args.damping, args.lam, np.full(g.node_count, 1 / g.node_count))
    for i in np.argsort(-R, kind="stable"):
        print(f"{g.label(i)}\t{R[i]!r}")
    return EXIT_OK


COMMANDS = {
    "rank": cmd_rank, "core": cmd_core, "compare": cmd_compare, "sweep": cmd_sweep,
    "toplist": cmd_toplist, "synth": cmd_synth, "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (CLIError, GraphError, RankError, oracle.OracleError, ValueError, OSError) as exc:
        print(f"maxrank: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
