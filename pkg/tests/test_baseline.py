import math
from collections import Counter

import numpy as np
import pytest
from scipy.stats import hypergeom

from pkgnet.baseline import (
    ALGORITHM_ID,
    RandomGraphSpec,
    analytic_c_random,
    analytic_l_random,
    er_edges,
    er_random_graph,
)
from pkgnet.metrics import clustering_coefficient


def test_complete_and_empty():
    g = er_random_graph(RandomGraphSpec(10, 45, seed=1))
    assert g.m_undirected == 45 and g.m == 90
    assert set(g.und_degree.tolist()) == {9}
    g = er_random_graph(RandomGraphSpec(7, 0))
    assert (g.n, g.m) == (7, 0)


@pytest.mark.parametrize("n, m", [(0, 0), (5, 11), (5, -1)])
def test_invalid_spec(n, m):
    with pytest.raises(ValueError):
        RandomGraphSpec(n, m)


@pytest.mark.parametrize("n, m", [(1, 0), (2, 1), (30, 200), (30, 430), (500, 900)])
def test_exact_edge_count(n, m):
    e = er_edges(RandomGraphSpec(n, m, seed=3))
    assert e.shape == (m, 2)
    assert np.all(e[:, 0] < e[:, 1])
    assert len({tuple(x) for x in e.tolist()}) == m
    assert er_random_graph(RandomGraphSpec(n, m, seed=3)).n == n


def test_seed_determinism():
    differing = 0
    for s in range(100):
        a = er_edges(RandomGraphSpec(60, 80, seed=s))
        assert np.array_equal(a, er_edges(RandomGraphSpec(60, 80, seed=s)))
        differing += not np.array_equal(a, er_edges(RandomGraphSpec(60, 80, seed=s + 1000)))
    assert differing == 100


def test_edge_slot_uniformity():
    counts = Counter()
    draws = 10**4
    for s in range(draws):
        counts.update(map(tuple, er_edges(RandomGraphSpec(6, 5, seed=s)).tolist()))
    assert len(counts) == 15
    for slot, c in counts.items():
        assert abs(c / draws - 5 / 15) <= 0.02, slot


def test_analytic_formulas():
    assert analytic_c_random(1000, 4) == 0.004
    assert analytic_c_random(10, 0) == 0
    assert analytic_c_random(19504, 3.79) == pytest.approx(1.94e-4, abs=5e-7)
    assert analytic_l_random(64, 4) == pytest.approx(3.0, abs=1e-12)
    assert analytic_l_random(19504, 3.79) == pytest.approx(7.41, abs=0.01)
    with pytest.raises(ValueError):
        analytic_c_random(0, 1)
    with pytest.raises(ValueError):
        analytic_l_random(100, 1.0)


def _within_3se(values, target):
    mean = math.fsum(values) / len(values)
    se = np.std(values, ddof=1) / math.sqrt(len(values))
    return abs(mean - target) <= 3 * se


@pytest.mark.slow
def test_clustering_matches_analytic_mean():
    n, m = 1000, 2000
    runs = [clustering_coefficient(er_random_graph(RandomGraphSpec(n, m, seed=s))) for s in range(100)]
    # k/n describes vertices whose C_v is defined (degree >= 2)
    assert _within_3se([c.average_excluding_low_degree for c in runs], 0.004)
    # with degree < 2 counted as 0: E[C] = sum_{k>=2} P(deg = k) (m - k) / (N - n + 1),
    # deg ~ Hypergeometric(N, n - 1, m) and N = n(n-1)/2
    slots = n * (n - 1) // 2
    k = np.arange(0, 60)
    pk = hypergeom(slots, n - 1, m).pmf(k)
    expected = float(np.sum(pk[k >= 2] * (m - k[k >= 2]) / (slots - n + 1)))
    assert _within_3se([c.average for c in runs], expected)


def test_algorithm_id_recorded():
    assert "rejection" in ALGORITHM_ID
