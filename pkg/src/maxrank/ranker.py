"""PageRank and MaxRank by power iteration over backlinks.

One sweep computes, for every node ``j`` with backlinks ``B(j)``::

    R'(j) = c * (lam * R(i*) / n[i*]
                 + (1 - lam) * (sum_{i in B(j)} R(i) / n[i] + D / N))
            + (1 - c) * v(j)

where ``i*`` is the highest-scoring backlink (smallest id on ties) and
``D`` is the mass sitting on dangling nodes.  The dangling share only
enters the random-backlink term.  ``lam = 0`` is plain PageRank.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from .graph import Graph

NO_BACKLINK = -1


class RankError(ValueError):
    pass


@dataclass(frozen=True)
class RankParams:
    """Solver settings.  ``teleport=None`` means uniform ``1/N``."""

    c: float = 0.85
    lam: float = 0.0
    teleport: Optional[np.ndarray] = None
    tol: float = 1e-10
    max_iters: int = 1000

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise RankError(f"damping c must lie in (0, 1), got {self.c}")
        if not 0.0 <= self.lam <= 1.0:
            raise RankError(f"lambda must lie in [0, 1], got {self.lam}")
        if not self.tol > 0:
            raise RankError(f"tol must be positive, got {self.tol}")
        if int(self.max_iters) < 1:
            raise RankError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.teleport is not None:
            v = np.asarray(self.teleport, dtype=np.float64)
            if v.ndim != 1 or not np.all(np.isfinite(v)) or np.any(v < 0):
                raise RankError("teleport vector must be finite and nonnegative")
            if abs(math.fsum(v) - 1.0) > 1e-12:
                raise RankError(f"teleport vector sums to {math.fsum(v)!r}, not 1")
            object.__setattr__(self, "teleport", v)

    def teleport_for(self, n: int) -> np.ndarray:
        if self.teleport is None:
            return np.full(n, 1.0 / n)
        if len(self.teleport) != n:
            raise RankError(f"teleport has length {len(self.teleport)}, graph has {n} nodes")
        return self.teleport

    def as_dict(self) -> dict:
        return {
            "c": self.c,
            "lambda": self.lam,
            "teleport": "uniform" if self.teleport is None else "custom",
            "tol": self.tol,
            "max_iters": self.max_iters,
        }


@dataclass
class RankResult:
    scores: np.ndarray
    best_backlink: np.ndarray  # NO_BACKLINK where B(j) is empty
    iterations: int
    trace: list[float]
    converged: bool
    params: RankParams = field(default_factory=RankParams)

    @property
    def total(self) -> float:
        return float(np.sum(self.scores))

    def order(self) -> np.ndarray:
        """Node ids by descending score, ascending id on ties."""
        return ranking_order(self.scores)


def ranking_order(scores) -> np.ndarray:
    scores = np.asarray(scores)
    return np.lexsort((np.arange(len(scores)), -scores))


class _Sweep:
    """Per-graph precomputation shared by all iterations of a solve."""

    def __init__(self, g: Graph, threads: int = 1):
        self.g = g
        n = g.node_count
        self.n = n
        self.indptr = g.indptr
        self.indices = g.indices
        self.dangling = g.dangling
        deg = g.out_degree.astype(np.float64)
        self.has_out = deg > 0
        self.deg = np.where(self.has_out, deg, 1.0)
        self.adj = sp.csr_matrix(
            (np.ones(g.edge_count), g.indices, g.indptr), shape=(n, n)
        )
        self.adj.has_sorted_indices = True
        self.threads = max(1, int(threads))
        # fixed partition of destination rows; results do not depend on it
        bounds = np.linspace(0, n, self.threads + 1).astype(np.int64)
        self.blocks = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        self.row_blocks = [self.adj[a:b] for a, b in self.blocks]
        self._pool = ThreadPoolExecutor(self.threads) if len(self.blocks) > 1 else None

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()

    def argmax(self, R: np.ndarray, lo: int = 0, hi: int | None = None) -> np.ndarray:
        """Best backlink of each node in ``[lo, hi)``; ties go to the smallest id."""
        hi = self.n if hi is None else hi
        start, stop = self.indptr[lo], self.indptr[hi]
        best = np.full(hi - lo, NO_BACKLINK, dtype=np.int64)
        if stop == start:
            return best
        src = self.indices[start:stop]
        vals = R[src]
        counts = np.diff(self.indptr[lo:hi + 1])
        rows = np.flatnonzero(counts)
        offs = (self.indptr[lo:hi] - start)[rows]
        rowmax = np.maximum.reduceat(vals, offs)
        pos = np.arange(len(vals))
        pos = np.where(vals == np.repeat(rowmax, counts[rows]), pos, len(vals))
        best[rows] = src[np.minimum.reduceat(pos, offs)]
        return best

    def step(self, R: np.ndarray, c: float, lam: float, v: np.ndarray):
        share = np.zeros(self.n)
        np.divide(R, self.deg, out=share, where=self.has_out)
        dmass = float(np.sum(R[self.dangling])) / self.n

        out = np.empty(self.n)
        best = np.empty(self.n, dtype=np.int64)

        def run(k):
            lo, hi = self.blocks[k]
            b = self.argmax(R, lo, hi)
            linked = b >= 0
            top = np.zeros(hi - lo)
            top[linked] = share[b[linked]]
            spread = self.row_blocks[k] @ share + dmass
            out[lo:hi] = c * (lam * top + (1.0 - lam) * spread) + (1.0 - c) * v[lo:hi]
            best[lo:hi] = b

        if self._pool is None:
            for k in range(len(self.blocks)):
                run(k)
        else:
            list(self._pool.map(run, range(len(self.blocks))))
        return out, best


def _check_vector(R, n: int, what: str) -> np.ndarray:
    R = np.asarray(R, dtype=np.float64)
    if R.shape != (n,):
        raise RankError(f"{what} has shape {R.shape}, expected ({n},)")
    if not np.all(np.isfinite(R)) or np.any(R < 0):
        raise RankError(f"{what} must be finite and nonnegative")
    return R


def maxrank_iterate(g: Graph, R_prev, params: RankParams):
    """Apply one MaxRank sweep.  Returns ``(R_next, best_backlink)``.

    ``best_backlink`` is the assignment used in this sweep, i.e. the argmax
    over ``R_prev``.
    """
    R = _check_vector(R_prev, g.node_count, "R_prev")
    sweep = _Sweep(g)
    return sweep.step(R, params.c, params.lam, params.teleport_for(g.node_count))


IterationCallback = Callable[[int, np.ndarray, np.ndarray, float], None]


def solve(g: Graph, params: RankParams | None = None, R0=None, *,
          threads: int = 1, callback: IterationCallback | None = None) -> RankResult:
    """Power iteration until the 1-norm change drops to ``params.tol``.

    ``callback(t, R_t, assignment_t, delta_t)`` is invoked after every
    sweep; ``assignment_t`` is the best-backlink map that produced ``R_t``.
    Hitting ``max_iters`` returns with ``converged=False``.
    """
    params = params or RankParams()
    n = g.node_count
    v = params.teleport_for(n)
    R = v.copy() if R0 is None else _check_vector(R0, n, "R0").copy()

    sweep = _Sweep(g, threads)
    trace: list[float] = []
    converged = False
    try:
        for t in range(1, int(params.max_iters) + 1):
            R_next, assign = sweep.step(R, params.c, params.lam, v)
            delta = float(np.sum(np.abs(R_next - R)))
            trace.append(delta)
            R = R_next
            if callback is not None:
                callback(t, R, assign, delta)
            if delta <= params.tol:
                converged = True
                break
        best = sweep.argmax(R)
    finally:
        sweep.close()
    return RankResult(R, best, len(trace), trace, converged, params)


def pagerank(g: Graph, c: float = 0.85, v=None, tol: float = 1e-10,
             max_iters: int = 1000, **kw) -> RankResult:
    return solve(g, RankParams(c=c, lam=0.0, teleport=v, tol=tol, max_iters=max_iters), **kw)
