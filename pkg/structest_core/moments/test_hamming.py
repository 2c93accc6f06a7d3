import itertools
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from structest_core.errors import ConfigurationError
from structest_core.graphs import (
    GraphSample,
    RegularGraph,
    build_circulant,
    build_random_regular,
    cut_size,
    wedge_count,
)
from structest_core.moments import (
    asymptotic_cut_var,
    cut_mean_fraction,
    cut_var_fraction,
    exact_cut_mean,
    exact_cut_var,
    ks_bound,
    quad_form_moments,
    reference_sigma,
    stein_coefficient,
    wedge_moments,
)


def enumerate_cut_moments(g: RegularGraph, l: int):
    cuts = [cut_size(g, subset) for subset in itertools.combinations(range(g.n), l)]
    count = len(cuts)
    mean = Fraction(sum(cuts), count)
    var = Fraction(sum(c * c for c in cuts), count) - mean * mean
    return mean, var


def graphs_for(n: int, d: int, seed: int = 0):
    graphs = [build_random_regular(n, d, seed=seed)]
    if d % 2 == 0 and d >= 2:
        graphs.append(build_circulant(n, d))
    return graphs


def test_c4_examples():
    assert exact_cut_mean(4, 2, 2) == pytest.approx(8 / 3)
    assert cut_var_fraction(4, 2, 2) == Fraction(8, 9)
    m = quad_form_moments(4, 2, 2)
    assert m.mean == pytest.approx(4 / 3)
    assert m.variance == pytest.approx(32 / 9)
    full = quad_form_moments(4, 2, 4)
    assert full.mean == 4 and full.variance == 0


@pytest.mark.parametrize('l', [0, 9])
def test_degenerate_spheres(l):
    assert exact_cut_mean(9, 4, l) == 0
    assert exact_cut_var(9, 4, l) == 0


def test_singleton_sphere_has_constant_cut():
    assert exact_cut_mean(10, 3, 1) == pytest.approx(3)
    assert cut_var_fraction(10, 3, 1) == 0
    assert cut_var_fraction(10, 3, 9) == 0


@pytest.mark.parametrize('n', range(2, 11))
def test_formulas_match_enumeration(n):
    for d in range(1, n):
        if (n * d) % 2:
            continue
        for g in graphs_for(n, d, seed=n * 31 + d):
            for l in range(n + 1):
                mean, var = enumerate_cut_moments(g, l)
                assert cut_mean_fraction(n, d, l) == mean
                assert cut_var_fraction(n, d, l) == var


def test_random_triples_match_enumeration():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 100:
        n = int(rng.integers(3, 13))
        d = int(rng.integers(1, n))
        if (n * d) % 2:
            continue
        l = int(rng.integers(0, n + 1))
        g = build_random_regular(n, d, seed=checked)
        mean, _ = enumerate_cut_moments(g, l)
        assert cut_mean_fraction(n, d, l) == mean
        assert mean == Fraction(l * (n - l) * d, n - 1)
        checked += 1


def test_variance_is_graph_independent():
    n, d = 8, 3
    graphs = [build_random_regular(n, d, seed=s) for s in range(5)]
    graphs.append(RegularGraph.from_edges(n, nx.convert_node_labels_to_integers(nx.hypercube_graph(3)).edges()))
    for l in range(n + 1):
        variances = {enumerate_cut_moments(g, l)[1] for g in graphs}
        assert variances == {cut_var_fraction(n, d, l)}


def test_variance_graph_independent_circulant_vs_random():
    g1 = build_circulant(8, 4)
    g2 = build_random_regular(8, 4, seed=11)
    for l in range(9):
        assert enumerate_cut_moments(g1, l) == enumerate_cut_moments(g2, l)


@pytest.mark.parametrize('n, d', [(10, 3), (12, 4), (200, 10), (1001, 50)])
def test_variance_symmetry(n, d):
    for l in range(0, n + 1, max(1, n // 20)):
        assert cut_var_fraction(n, d, l) == cut_var_fraction(n, d, n - l)


def test_large_instance_matches_asymptotic():
    var = exact_cut_var(10000, 10, 5000)
    assert abs(var / 12500 - 1) <= 10 / 10000


@pytest.mark.parametrize('n, d', [(1000, 10), (10000, 10), (10000, 100)])
def test_quadratic_form_variance_asymptotics(n, d):
    s = 0.5
    m = quad_form_moments(n, d, n // 2)
    target = 8 * n * d * s ** 2 * (1 - s) ** 2
    assert abs(m.variance / target - 1) <= 3 * d / n


def test_asymptotic_agreement_over_band():
    ratios = []
    n, d = 2000, 8
    for s in np.linspace(0.1, 0.9, 9):
        l = int(round(s * n))
        ratios.append(exact_cut_var(n, d, l) / asymptotic_cut_var(n, d, l) - 1)
    fitted = max(abs(r) for r in ratios) * n / d
    assert fitted < 10


def enumerate_wedge_moments(n: int, m: int):
    N = n * (n - 1) // 2
    values = []
    for chosen in itertools.combinations(range(N), m):
        bits = np.zeros(N, dtype=np.uint8)
        bits[list(chosen)] = 1
        values.append(wedge_count(GraphSample(n, bits)))
    mean = Fraction(sum(values), len(values))
    return mean, Fraction(sum(v * v for v in values), len(values)) - mean * mean


def test_wedge_examples():
    m = wedge_moments(4, 2)
    assert m.mean == pytest.approx(0.8)
    assert m.variance == pytest.approx(0.16)
    empty = wedge_moments(6, 0)
    assert empty.mean == 0 and empty.variance == 0


@pytest.mark.parametrize('n', [2, 3, 4, 5])
def test_wedge_moments_match_enumeration(n):
    N = n * (n - 1) // 2
    for m in range(N + 1):
        mean, var = enumerate_wedge_moments(n, m)
        moments = wedge_moments(n, m)
        assert moments.mean == pytest.approx(float(mean), rel=1e-12, abs=1e-12)
        assert moments.variance == pytest.approx(float(var), rel=1e-10, abs=1e-12)


def test_wedge_moments_reject_bad_edge_count():
    with pytest.raises(ConfigurationError):
        wedge_moments(4, 7)


def test_ks_bound_values():
    assert ks_bound(16, 1, constant=1.0) == pytest.approx(0.5)
    assert ks_bound(10000, 10, constant=1.0) == pytest.approx(0.001 ** 0.25)
    assert ks_bound(10000, 10, constant=2.0) == pytest.approx(2 * 0.001 ** 0.25)


def test_reference_sigma_uses_central_sphere():
    assert reference_sigma(4, 2) == pytest.approx((32 / 9) ** 0.5)


def test_stein_coefficient():
    assert stein_coefficient(4) == pytest.approx(0.75)
    assert stein_coefficient(100) == pytest.approx(4 * 99 / 10000)
