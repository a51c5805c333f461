"""CSV/JSON writers for rankings, core statistics and comparison tables.

Every artifact starts with the effective run configuration: CSV files
carry it as ``# config: {...}`` comment lines, JSON files under
``"config"``.  Floats are written with ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import csv
import json
import math
from typing import TextIO

import numpy as np

from .analysis import CoreStats, InfluenceProfile
from .compare import RankComparison
from .graph import Graph
from .ranker import RankResult


def _f(x) -> str:
    return repr(float(x))


def _header(stream: TextIO, config: dict | None):
    if config:
        stream.write("# config: " + json.dumps(config, sort_keys=True) + "\n")


def _rows(stream: TextIO, header, rows, config=None):
    _header(stream, config)
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def write_scores_csv(stream: TextIO, g: Graph, result: RankResult, config=None):
    rows = []
    for i in result.order():
        b = int(result.best_backlink[i])
        rows.append((int(i), g.label(i), _f(result.scores[i]), "" if b < 0 else b))
    _rows(stream, ("id", "label", "score", "best_backlink_id"), rows, config)


def scores_json(g: Graph, result: RankResult, config=None) -> dict:
    order = result.order()
    return {
        "config": config or {},
        "params": result.params.as_dict(),
        "iterations": result.iterations,
        "converged": result.converged,
        "total": float(np.sum(result.scores)),
        "trace": [float(d) for d in result.trace],
        "scores": [
            {
                "id": int(i),
                "label": g.label(i),
                "score": float(result.scores[i]),
                "best_backlink_id": None if result.best_backlink[i] < 0
                else int(result.best_backlink[i]),
            }
            for i in order
        ],
    }


def write_trace_csv(stream: TextIO, result: RankResult, config=None):
    _rows(stream, ("iteration", "delta"),
          [(t, _f(d)) for t, d in enumerate(result.trace, start=1)], config)


def write_core_csv(stream: TextIO, g: Graph, result: RankResult, stats: CoreStats,
                   config=None):
    order = np.lexsort((stats.core, -stats.tbb))
    rows = []
    for k in order:
        i = int(stats.core[k])
        rows.append((i, g.label(i), int(stats.tbb[k]), int(g.out_degree[i]),
                     _f(stats.tbb_ratio[k]), _f(result.scores[i])))
    _rows(stream, ("id", "label", "tbb", "out_degree", "tbb_ratio", "score"), rows, config)


def core_json(stats: CoreStats, config=None) -> dict:
    return {"config": config or {}, **stats.summary()}


def write_influence_csv(stream: TextIO, g: Graph, result: RankResult,
                        prof: InfluenceProfile, config=None):
    rows = [(int(j), g.label(j), _f(result.scores[j]), _f(r))
            for j, r in zip(prof.nodes, prof.ratio)]
    _rows(stream, ("id", "label", "score", "influenced_ratio"), rows, config)


def write_pairs_csv(stream: TextIO, header, pairs, config=None):
    _rows(stream, header, [tuple(_f(x) if isinstance(x, float) else x for x in p)
                           for p in pairs], config)


def write_comparison_csv(stream: TextIO, comparisons: list[RankComparison], config=None):
    rows = []
    for cmp in comparisons:
        for lam, k, ck, tk in cmp.rows():
            rows.append((_f(lam), k, _f(ck), "" if math.isnan(tk) else _f(tk)))
    _rows(stream, ("lambda", "k", "c_k", "tau_k"), rows, config)


def comparison_json(comparisons: list[RankComparison], config=None) -> dict:
    return {
        "config": config or {},
        "comparisons": [
            {
                "lambda": cmp.lam,
                "reference": cmp.reference_name,
                "candidate": cmp.candidate_name,
                "params": cmp.params,
                "schedule": cmp.schedule,
                "c_k": cmp.c_k,
                "tau_k": [None if math.isnan(t) else t for t in cmp.tau_k],
            }
            for cmp in comparisons
        ],
    }


def dump_json(obj, stream: TextIO):
    json.dump(obj, stream, indent=2, sort_keys=False)
    stream.write("\n")
