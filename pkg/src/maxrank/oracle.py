"""Slow reference implementations for cross-checking.

Everything here is written straight from the definitions with dense
matrices and explicit Python loops.  Nothing is shared with the sparse
kernels except the two conventions they must agree on: argmax ties go to
the smallest id, and dangling mass is spread uniformly through the
random-backlink term only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .graph import Graph

DENSE_LIMIT = 2000


class OracleError(ValueError):
    pass


def _guard(n):
    if n > DENSE_LIMIT:
        raise OracleError(f"N={n} exceeds the dense bound {DENSE_LIMIT}")


@dataclass
class DenseGraph:
    n: int
    L: np.ndarray  # L[i, j] = 1 iff i links to j
    S: np.ndarray
    G: np.ndarray

    @classmethod
    def build(cls, g: Graph, c: float = 0.85, v=None) -> "DenseGraph":
        n = g.node_count
        _guard(n)
        v = np.full(n, 1.0 / n) if v is None else np.asarray(v, dtype=float)
        L = np.zeros((n, n))
        for j in range(n):
            for i in g.backlinks(j):
                L[i, j] = 1.0
        S = np.empty((n, n))
        for i in range(n):
            deg = L[i].sum()
            S[i] = L[i] / deg if deg > 0 else 1.0 / n
        G = c * S + (1 - c) * np.outer(np.ones(n), v)
        for M, name in ((S, "S"), (G, "G")):
            err = np.max(np.abs(M.sum(axis=1) - 1.0))
            if err > 1e-12:
                raise OracleError(f"{name} is not row-stochastic (err {err:.3g})")
        return cls(n, L, S, G)


def oracle_pagerank(dg: DenseGraph, tol: float = 1e-13, max_iters: int = 100_000) -> np.ndarray:
    """Stationary vector of ``G`` by iterating ``pi <- G^T pi``."""
    _guard(dg.n)
    pi = np.full(dg.n, 1.0 / dg.n)
    GT = dg.G.T
    for _ in range(max_iters):
        nxt = GT @ pi
        if np.abs(nxt - pi).sum() <= tol:
            pi = nxt
            break
        pi = nxt
    return pi / pi.sum()


def oracle_pagerank_direct(dg: DenseGraph) -> np.ndarray:
    """Same vector from the null space of ``G^T - I`` (no iteration)."""
    n = dg.n
    A = dg.G.T - np.eye(n)
    A[-1] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    return np.linalg.solve(A, b)


def best_backlink(L: np.ndarray, R, j: int):
    """Argmax of R over sources linking to j, smallest id first; None if none."""
    best = None
    for i in range(len(R)):
        if L[i, j] and (best is None or R[i] > R[best]):
            best = i
    return best


def oracle_maxrank_step(L: np.ndarray, R_prev, c: float, lam: float, v):
    """One sweep of the MaxRank update with plain loops.

    Returns ``(R_next, best)`` with ``best[j] = -1`` for nodes without
    backlinks.
    """
    n = L.shape[0]
    _guard(n)
    outdeg = [int(L[i].sum()) for i in range(n)]
    dangling_mass = 0.0
    for i in range(n):
        if outdeg[i] == 0:
            dangling_mass += R_prev[i]
    R_next = np.zeros(n)
    best = np.full(n, -1, dtype=np.int64)
    for j in range(n):
        total = 0.0
        for i in range(n):
            if L[i, j]:
                total += R_prev[i] / outdeg[i]
        total += dangling_mass / n
        top = 0.0
        b = best_backlink(L, R_prev, j)
        if b is not None:
            top = R_prev[b] / outdeg[b]
            best[j] = b
        R_next[j] = c * (lam * top + (1 - lam) * total) + (1 - c) * v[j]
    return R_next, best


def oracle_maxrank(L, c, lam, v, tol=1e-13, max_iters=10_000):
    R = np.array(v, dtype=float)
    for _ in range(max_iters):
        nxt, _ = oracle_maxrank_step(L, R, c, lam, v)
        done = np.abs(nxt - R).sum() <= tol
        R = nxt
        if done:
            break
    return R


def top_k(scores, k):
    idx = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return idx[:k]


def pair_tau(ref_scores, cand_scores, k):
    """Concordance fraction over all pairs of the reference's top-k.

    Pairs tied on one side only score 1/2; tied on both sides, 1.
    """
    top = top_k(ref_scores, k)
    agree = 0.0
    for p, q in combinations(top, 2):
        ref_tie = ref_scores[p] == ref_scores[q]
        cand_tie = cand_scores[p] == cand_scores[q]
        if ref_tie and cand_tie:
            agree += 1.0
        elif ref_tie or cand_tie:
            agree += 0.5
        elif (ref_scores[p] > ref_scores[q]) == (cand_scores[p] > cand_scores[q]):
            agree += 1.0
    return agree / math.comb(k, 2)


def pair_overlap(ref_scores, cand_scores, k):
    return len(set(top_k(ref_scores, k)) & set(top_k(cand_scores, k))) / k


def oracle_metrics(g: Graph, scores, lam: float, c: float = 0.85,
                   reference=None, schedule=()) -> dict:
    """Recompute every analysis quantity from its definition.

    ``scores`` is a converged vector; best backlinks are re-derived from it.
    """
    n = g.node_count
    _guard(n)
    dg = DenseGraph.build(g, c)
    L = dg.L
    outdeg = L.sum(axis=1)
    best = {}
    for j in range(n):
        b = best_backlink(L, scores, j)
        if b is not None:
            best[j] = b
    tbb = {}
    for j, b in best.items():
        tbb[b] = tbb.get(b, 0) + 1
    core = sorted(tbb)
    total = sum(scores)
    infl = sum(scores[i] for i in core) / total if core else 0.0
    ratios = {}
    for j, b in best.items():
        ratios[j] = c * lam * scores[b] / outdeg[b] / scores[j]
    out = {
        "best": best,
        "core": core,
        "core_size": len(core),
        "tbb": tbb,
        "tbb_ratio": {i: tbb[i] / outdeg[i] for i in core},
        "collective_influence": infl,
        "avg_support": len(best) / len(core) if core else 0.0,
        "influenced_ratio": ratios,
    }
    if reference is not None:
        out["c_k"] = {k: pair_overlap(reference, scores, k) for k in schedule}
        out["tau_k"] = {k: pair_tau(reference, scores, k) for k in schedule if k >= 2}
    return out
