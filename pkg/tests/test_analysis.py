import numpy as np
import pytest

from maxrank.analysis import (core_size_sweep, core_stats, influenced_ratios, loglog_histogram,
                              tbb_ratio, tbb_vs_outdegree)
from maxrank.graph import Graph, GraphError
from maxrank.oracle import oracle_metrics, top_k
from maxrank.ranker import RankParams, RankResult, solve
from maxrank.synth import erdos_renyi, preferential_attachment

CYCLE = Graph.from_edges(2, [(0, 1), (1, 0)])
TRIANGLE = Graph.from_edges(3, [(0, 1), (0, 2), (1, 2), (2, 0)])


def test_tbb_ratio_arithmetic():
    assert float(tbb_ratio(3850, 5097)) == pytest.approx(0.755346, abs=1e-6)
    assert float(tbb_ratio(1448, 1448)) == 1.0


def test_two_cycle_core():
    res = solve(CYCLE, RankParams(lam=0.5))
    s = core_stats(CYCLE, res)
    assert s.core.tolist() == [0, 1]
    assert s.core_size == 2
    assert s.tbb.tolist() == [1, 1]
    assert s.tbb_ratio.tolist() == [1.0, 1.0]
    assert s.collective_influence == 1.0
    assert s.avg_support == 1.0


def test_core_stats_match_oracle_n30():
    g = Graph.from_edges(30, erdos_renyi(30, 0.12, seed=30))
    res = solve(g, RankParams(lam=0.5))
    s = core_stats(g, res)
    o = oracle_metrics(g, res.scores, 0.5)
    assert s.core.tolist() == o["core"]
    assert s.tbb.tolist() == [o["tbb"][i] for i in o["core"]]
    np.testing.assert_allclose(s.tbb_ratio, [o["tbb_ratio"][i] for i in o["core"]], atol=1e-12)
    assert s.collective_influence == pytest.approx(o["collective_influence"], abs=1e-12)
    assert s.avg_support == pytest.approx(o["avg_support"], abs=1e-12)
    assert s.tbb.sum() == s.supported == np.count_nonzero(g.in_degree)


def test_core_structure_on_scale_free_graph():
    g = Graph.from_edges(500, preferential_attachment(500, 3, seed=5))
    s = core_stats(g, solve(g, RankParams(lam=0.1)))
    deg = g.out_degree[s.core]
    assert np.all(deg >= 1)
    assert np.all(s.tbb <= deg)
    assert np.all(s.tbb_ratio[deg == 1] == 1.0)
    assert 0 < s.collective_influence <= 1


def test_core_stats_pure():
    g = Graph.from_edges(40, erdos_renyi(40, 0.1, seed=1))
    res = solve(g, RankParams(lam=0.3))
    a, b = core_stats(g, res), core_stats(g, res)
    assert a.tbb_ratio.tobytes() == b.tbb_ratio.tobytes()
    assert a.collective_influence == b.collective_influence


def test_sweep_single_lambda_consistent():
    g = Graph.from_edges(40, erdos_renyi(40, 0.1, seed=1))
    [(lam, size)] = core_size_sweep(g, 0.85, [0.3])
    assert size == core_stats(g, solve(g, RankParams(lam=0.3))).core_size


def test_sweep_two_cycle():
    assert [s for _, s in core_size_sweep(CYCLE, 0.85, [0, 0.5, 1])] == [2, 2, 2]


def test_sweep_matches_oracle_n50():
    g = Graph.from_edges(50, erdos_renyi(50, 0.1, seed=3))
    rows = core_size_sweep(g, 0.85, [0, 0.3, 0.9])
    for lam, size in rows:
        res = solve(g, RankParams(lam=lam))
        assert size == oracle_metrics(g, res.scores, lam)["core_size"]


def test_influenced_ratio_lambda_zero():
    g = Graph.from_edges(40, erdos_renyi(40, 0.1, seed=1))
    prof = influenced_ratios(g, solve(g, RankParams(lam=0.0)))
    assert len(prof.nodes) == np.count_nonzero(g.in_degree)
    assert np.all(prof.ratio == 0)


def test_influenced_ratio_two_cycle_closed_form():
    res = RankResult(np.array([0.5, 0.5]), np.array([1, 0]), 1, [0.0], True,
                     RankParams(c=0.85, lam=1.0))
    prof = influenced_ratios(CYCLE, res)
    np.testing.assert_allclose(prof.ratio, [0.85, 0.85], atol=1e-15)


def test_influenced_ratio_triangle_matches_oracle():
    res = solve(TRIANGLE, RankParams(lam=0.5))
    prof = influenced_ratios(TRIANGLE, res)
    o = oracle_metrics(TRIANGLE, res.scores, 0.5)["influenced_ratio"]
    assert prof.nodes.tolist() == sorted(o)
    np.testing.assert_allclose(prof.ratio, [o[j] for j in sorted(o)], atol=1e-12)
    assert np.all((prof.ratio >= 0) & (prof.ratio < 1))


def test_unweighted_influence_is_larger():
    g = Graph.from_edges(60, erdos_renyi(60, 0.1, seed=6))
    res = solve(g, RankParams(lam=0.4))
    w = influenced_ratios(g, res)
    u = influenced_ratios(g, res, weighted=False)
    np.testing.assert_allclose(w.ratio, 0.4 * u.ratio, rtol=1e-12)
    assert np.all(u.ratio < 1)


def test_tbb_vs_outdegree_two_cycle():
    res = solve(CYCLE, RankParams(lam=0.5))
    assert tbb_vs_outdegree(CYCLE, res, (1, 2)) == [(1, 1), (1, 1)]
    with pytest.raises(GraphError):
        tbb_vs_outdegree(CYCLE, res, (0, 2))
    with pytest.raises(GraphError):
        tbb_vs_outdegree(CYCLE, res, (1, 3))


def test_tbb_vs_outdegree_includes_non_core():
    # 0 -> 1 -> 2: node 2 outranks the rest but supports nobody
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    res = solve(g, RankParams(lam=0.5))
    assert res.order()[0] == 2
    assert tbb_vs_outdegree(g, res, (1, 1)) == [(0, 0)]


def test_tbb_vs_outdegree_matches_oracle_n50():
    g = Graph.from_edges(50, erdos_renyi(50, 0.1, seed=3))
    res = solve(g, RankParams(lam=0.5))
    o = oracle_metrics(g, res.scores, 0.5)
    want = [(int(g.out_degree[i]), o["tbb"].get(i, 0)) for i in top_k(res.scores, 10)]
    got = tbb_vs_outdegree(g, res, (1, 10))
    assert got == want
    assert all(t <= d for d, t in got)


def test_histogram_small_cases():
    assert [n for _, n in loglog_histogram([1, 1, 1], 1)] == [3]
    rows = loglog_histogram([1, 10, 100], 3)
    assert [n for _, n in rows] == [1, 1, 1]


def test_histogram_rejects_bad_input():
    with pytest.raises(ValueError):
        loglog_histogram([], 3)
    with pytest.raises(ValueError):
        loglog_histogram([1, 0, 3], 3)
    with pytest.raises(ValueError):
        loglog_histogram([1, 2], 0)


def test_histogram_power_law_recount():
    rng = np.random.default_rng(123)
    values = np.floor(rng.pareto(1.2, 5000) + 1).astype(int)
    rows = loglog_histogram(values, 20)
    top = values.max()
    edges = [top ** (k / 20) for k in range(21)]
    want = [0] * 20
    for x in values:
        k = 0
        while k < 19 and x > edges[k + 1]:
            k += 1
        want[k] += 1
    assert [n for _, n in rows] == want
    assert sum(want) == len(values)
    centers = [c for c, _ in rows]
    assert centers == sorted(centers)
