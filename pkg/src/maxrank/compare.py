"""Top-k agreement between two rankings: overlap ``c_k`` and concordance ``tau_k``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .ranker import RankParams, RankResult, ranking_order, solve

DEFAULT_SCHEDULE = (5, 10, 30, 50, 80, 100, 300, 500, 800, 1000)


def _scores(r) -> np.ndarray:
    return np.asarray(r.scores if isinstance(r, RankResult) else r, dtype=np.float64)


def _check_k(k, n, lo):
    if not lo <= k <= n:
        raise ValueError(f"k={k} outside [{lo}, {n}]")


def top_k(r, k: int) -> np.ndarray:
    """The ``k`` best node ids (descending score, ascending id on ties)."""
    s = _scores(r)
    _check_k(k, len(s), 1)
    return ranking_order(s)[:k]


def top_k_overlap(reference, candidate, k: int) -> float:
    ref, cand = _scores(reference), _scores(candidate)
    if len(ref) != len(cand):
        raise ValueError("rankings cover different node sets")
    common = np.intersect1d(top_k(ref, k), top_k(cand, k), assume_unique=True)
    return len(common) / k


class _Fenwick:
    def __init__(self, n):
        self.tree = [0] * (n + 1)

    def add(self, i):
        i += 1
        while i < len(self.tree):
            self.tree[i] += 1
            i += i & -i

    def prefix(self, i):
        """Count of inserted ranks < i."""
        total = 0
        while i > 0:
            total += self.tree[i]
            i -= i & -i
        return total


def _tied_pairs(*keys) -> int:
    _, counts = np.unique(np.column_stack(keys), axis=0, return_counts=True)
    return int(np.sum(counts * (counts - 1) // 2))


def kendall_tau_topk(reference, candidate, k: int) -> float:
    """Fraction of pairs from the reference's top-k that the candidate orders alike.

    Only the reference's top-k set is considered.  A pair tied in exactly
    one of the two rankings counts one half; a pair tied in both counts as
    concordant.
    """
    ref, cand = _scores(reference), _scores(candidate)
    if len(ref) != len(cand):
        raise ValueError("rankings cover different node sets")
    _check_k(k, len(ref), 2)
    top = top_k(ref, k)
    r, s = ref[top], cand[top]
    # descending reference, descending candidate inside reference ties
    order = np.lexsort((-s, -r))
    _, rank = np.unique(s[order], return_inverse=True)
    bit = _Fenwick(int(rank.max()) + 1)
    discordant = 0
    for x in rank.tolist():
        # earlier (reference-higher) elements with a strictly smaller candidate score
        discordant += bit.prefix(x)
        bit.add(x)
    pairs = math.comb(k, 2)
    ref_ties, cand_ties, both = _tied_pairs(r), _tied_pairs(s), _tied_pairs(r, s)
    return (pairs - discordant - 0.5 * (ref_ties + cand_ties) + both) / pairs


@dataclass
class RankComparison:
    schedule: list[int]
    c_k: list[float]
    tau_k: list[float]  # NaN where k < 2
    reference_name: str = "pagerank"
    candidate_name: str = "maxrank"
    lam: float | None = None
    params: dict = field(default_factory=dict)

    def rows(self):
        for k, ck, tk in zip(self.schedule, self.c_k, self.tau_k):
            yield self.lam, k, ck, tk

    def means(self) -> tuple[float, float]:
        return float(np.mean(self.c_k)), float(np.nanmean(self.tau_k))


def compare(reference, candidate, schedule, **names) -> RankComparison:
    n = len(_scores(reference))
    ks = clip_schedule(schedule, n)
    c = [top_k_overlap(reference, candidate, k) for k in ks]
    t = [kendall_tau_topk(reference, candidate, k) if k >= 2 else math.nan for k in ks]
    return RankComparison(ks, c, t, **names)


def clip_schedule(schedule, n: int) -> list[int]:
    ks = sorted({min(int(k), n) for k in schedule})
    if not ks or ks[0] < 1:
        raise ValueError(f"bad top-k schedule {list(schedule)!r}")
    return ks


def compare_sweep(g: Graph, c: float, lambdas, schedule=DEFAULT_SCHEDULE,
                  tol: float = 1e-10, max_iters: int = 1000,
                  threads: int = 1) -> list[RankComparison]:
    """Compare MaxRank at each ``lambda`` against PageRank (``lambda = 0``)."""
    ref = solve(g, RankParams(c=c, lam=0.0, tol=tol, max_iters=max_iters), threads=threads)
    out = []
    for lam in lambdas:
        params = RankParams(c=c, lam=lam, tol=tol, max_iters=max_iters)
        cand = ref if lam == 0 else solve(g, params, threads=threads)
        cmp = compare(ref, cand, schedule, candidate_name=f"maxrank(lambda={lam:g})")
        cmp.lam = lam
        cmp.params = params.as_dict()
        out.append(cmp)
    return out
