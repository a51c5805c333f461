"""Best-backlink core and influence measures on a converged ranking."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError
from .ranker import RankParams, RankResult, solve


@dataclass
class CoreStats:
    """Summary of which nodes act as best backlinks.

    ``core``, ``tbb`` and ``tbb_ratio`` are aligned arrays ordered by node id.
    """

    core: np.ndarray
    tbb: np.ndarray
    tbb_ratio: np.ndarray
    collective_influence: float
    avg_support: float
    supported: int  # nodes with at least one backlink

    @property
    def core_size(self) -> int:
        return len(self.core)

    def summary(self) -> dict:
        return {
            "core_size": self.core_size,
            "supported_nodes": self.supported,
            "collective_influence": self.collective_influence,
            "avg_support": self.avg_support,
        }


@dataclass
class InfluenceProfile:
    nodes: np.ndarray
    ratio: np.ndarray
    weighted: bool = True


def tbb_counts(g: Graph, result: RankResult) -> np.ndarray:
    """How many nodes pick each node as their best backlink (length N)."""
    b = result.best_backlink
    return np.bincount(b[b >= 0], minlength=g.node_count)


def tbb_ratio(tbb, out_degree):
    return np.asarray(tbb, dtype=np.float64) / np.asarray(out_degree, dtype=np.float64)


def core_stats(g: Graph, result: RankResult) -> CoreStats:
    counts = tbb_counts(g, result)
    core = np.flatnonzero(counts)
    tbb = counts[core]
    supported = int(np.count_nonzero(result.best_backlink >= 0))
    total = float(np.sum(result.scores))
    influence = float(np.sum(result.scores[core])) / total if total > 0 else 0.0
    return CoreStats(
        core=core,
        tbb=tbb,
        tbb_ratio=tbb_ratio(tbb, g.out_degree[core]),
        collective_influence=influence,
        avg_support=supported / len(core) if len(core) else 0.0,
        supported=supported,
    )


def core_size_sweep(g: Graph, c: float, lambdas, tol: float = 1e-10,
                    max_iters: int = 1000, threads: int = 1) -> list[tuple[float, int]]:
    lambdas = list(lambdas)
    if not lambdas:
        raise ValueError("need at least one lambda")
    rows = []
    for lam in lambdas:
        res = solve(g, RankParams(c=c, lam=lam, tol=tol, max_iters=max_iters), threads=threads)
        rows.append((lam, core_stats(g, res).core_size))
    return rows


def influenced_ratios(g: Graph, result: RankResult, weighted: bool = True) -> InfluenceProfile:
    """Share of each node's score coming from its best backlink.

    With ``weighted`` (default) this is the lambda-weighted max term
    ``c * lam * R(i*) / n(i*)``.  Otherwise the whole flow along the link
    ``i* -> j``, ``c * R(i*) / n(i*)``, is used.
    """
    b = result.best_backlink
    nodes = np.flatnonzero(b >= 0)
    src = b[nodes]
    R = result.scores
    weight = result.params.c * (result.params.lam if weighted else 1.0)
    flow = weight * R[src] / g.out_degree[src]
    return InfluenceProfile(nodes, flow / R[nodes], weighted)


def tbb_vs_outdegree(g: Graph, result: RankResult, rank_range) -> list[tuple[int, int]]:
    """``(out_degree, tbb)`` for the authorities ranked ``lo..hi`` (1-based)."""
    lo, hi = rank_range
    if not 1 <= lo <= hi <= g.node_count:
        raise GraphError(f"rank range ({lo}, {hi}) outside [1, {g.node_count}]")
    counts = tbb_counts(g, result)
    ids = result.order()[lo - 1:hi]
    return [(int(g.out_degree[i]), int(counts[i])) for i in ids]


def loglog_histogram(values, bins: int = 50) -> list[tuple[float, int]]:
    """Counts over base-10 log-spaced bins covering ``[1, max(values)]``.

    Rows are ``(geometric bin center, count)``; empty bins are kept so the
    counts always add up to ``len(values)``.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        raise ValueError("no values to bin")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if np.any(x <= 0):
        raise ValueError("log-binned values must be positive")
    top = float(x.max())
    edges = np.logspace(0.0, np.log10(top), bins + 1) if top > 1 else np.ones(bins + 1)
    edges[0], edges[-1] = min(1.0, float(x.min())), top
    # bins are (lo, hi], the first one closed on the left
    idx = np.searchsorted(edges[1:-1], x, side="left")
    counts = np.bincount(idx, minlength=bins)
    centers = np.sqrt(edges[:-1] * edges[1:])
    return [(float(c), int(n)) for c, n in zip(centers, counts)]
