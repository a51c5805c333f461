import numpy as np
import pytest

from maxrank.graph import Graph
from maxrank.oracle import (DENSE_LIMIT, DenseGraph, OracleError, oracle_maxrank,
                            oracle_maxrank_step, oracle_metrics, oracle_pagerank,
                            oracle_pagerank_direct, pair_tau)
from maxrank.ranker import RankParams, pagerank, solve
from maxrank.synth import erdos_renyi, preferential_attachment

CYCLE = Graph.from_edges(2, [(0, 1), (1, 0)])


def test_dense_matrices_are_stochastic():
    g = Graph.from_edges(20, erdos_renyi(20, 0.1, seed=2))
    assert len(g.dangling) > 0
    dg = DenseGraph.build(g)
    np.testing.assert_allclose(dg.S.sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(dg.G.sum(axis=1), 1.0, atol=1e-12)


def test_small_pageranks():
    np.testing.assert_allclose(oracle_pagerank(DenseGraph.build(CYCLE)), [0.5, 0.5])
    assert oracle_pagerank(DenseGraph.build(Graph.from_edges(1, []))).tolist() == [1.0]


def test_iterative_and_direct_agree():
    g = Graph.from_edges(60, preferential_attachment(60, 2, seed=8))
    dg = DenseGraph.build(g)
    pi = oracle_pagerank(dg)
    assert abs(pi.sum() - 1) <= 1e-10
    np.testing.assert_allclose(pi, oracle_pagerank_direct(dg), atol=1e-12)


def test_star_against_ranker():
    star = Graph.from_edges(5, [(0, j) for j in range(1, 5)])
    np.testing.assert_allclose(oracle_pagerank(DenseGraph.build(star)), pagerank(star).scores,
                               atol=1e-8)


def test_dense_bound():
    big = Graph.from_edges(DENSE_LIMIT + 1, [(0, 1)])
    with pytest.raises(OracleError):
        DenseGraph.build(big)


def test_maxrank_step_two_cycle():
    L = DenseGraph.build(CYCLE).L
    R, best = oracle_maxrank_step(L, [0.5, 0.5], 0.85, 0.7, [0.5, 0.5])
    assert R.tolist() == [0.5, 0.5]
    assert best.tolist() == [1, 0]


def test_oracle_maxrank_matches_solve():
    g = Graph.from_edges(25, erdos_renyi(25, 0.15, seed=5))
    dg = DenseGraph.build(g)
    res = solve(g, RankParams(lam=0.5))
    assert res.converged
    np.testing.assert_allclose(oracle_maxrank(dg.L, 0.85, 0.5, np.full(25, 1 / 25)), res.scores,
                               atol=1e-10)


def test_metrics_two_cycle():
    m = oracle_metrics(CYCLE, np.array([0.5, 0.5]), 0.5)
    assert m["core"] == [0, 1] and m["tbb"] == {0: 1, 1: 1}
    assert m["collective_influence"] == 1.0 and m["avg_support"] == 1.0


def test_pair_tau_three():
    assert pair_tau([3, 2, 1], [2, 3, 1], 3) == pytest.approx(2 / 3)
