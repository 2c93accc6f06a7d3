import inspect
import math

import numpy as np
import pytest
from scipy.stats import norm

from structest_core.canonical import (
    H0,
    H1,
    ErgmTestConfig,
    IsingTestConfig,
    decide,
    error_bound,
    ergm_test,
    in_ising_band,
    ising_test,
    standardized_ising_stat,
    threshold_from_rule,
)
from structest_core.errors import ConfigurationError, InfeasibleThresholdError
from structest_core.graphs import GraphSample, SpinConfig, build_circulant, build_random_regular
from structest_core.samplers import sample_uniform_sphere


def test_all_ones_leaves_band(c4):
    d = ising_test(SpinConfig([1, 1, 1, 1]), IsingTestConfig(c4, threshold=0.0, epsilon=0.1))
    assert d.verdict == H1
    assert d.sphere_label == 1.0
    assert d.standardized_stat is None and not d.in_band


def test_c4_standardized_values(c4):
    cfg = IsingTestConfig(c4, threshold=10.0, epsilon=0.1)
    d = ising_test(SpinConfig([1, 1, -1, -1]), cfg)
    assert d.verdict == H0
    assert d.standardized_stat == pytest.approx((0 - 8 / 3) / (2 * math.sqrt(32 / 9)))
    assert d.standardized_stat == pytest.approx(-0.7071, abs=1e-4)

    alt = ising_test(SpinConfig([1, -1, 1, -1]), IsingTestConfig(c4, threshold=0.0, epsilon=0.1))
    assert alt.standardized_stat == pytest.approx(-2.83, abs=0.01)
    assert alt.verdict == H0

    low = ising_test(SpinConfig([1, 1, -1, -1]), IsingTestConfig(c4, threshold=-1.0, epsilon=0.1))
    assert low.verdict == H1


def test_tie_at_threshold_decides_structure(c4):
    x = SpinConfig([1, 1, -1, -1])
    z = standardized_ising_stat(x, c4)
    assert ising_test(x, IsingTestConfig(c4, threshold=z, epsilon=0.1)).verdict == H1


def test_degenerate_sphere_in_band_is_a_configuration_error(c4):
    with pytest.raises(ConfigurationError):
        ising_test(SpinConfig([1, -1, -1, -1]), IsingTestConfig(c4, threshold=0.0, epsilon=0.1))


def test_band_membership_in_integer_terms():
    assert in_ising_band(1, 10, 0.2)
    assert not in_ising_band(0, 10, 0.2)
    assert in_ising_band(9, 10, 0.2)
    assert not in_ising_band(10, 10, 0.2)


def test_empty_band_rejected():
    with pytest.raises(ConfigurationError):
        IsingTestConfig(build_circulant(5, 2), threshold=0.0, epsilon=0.9)


def test_ising_test_signature_takes_no_model_parameters():
    params = set(inspect.signature(ising_test).parameters)
    assert params == {'x', 'cfg'}
    fields = set(IsingTestConfig.__dataclass_fields__)
    assert not fields & {'beta', 'h', 'beta_cw', 'h_cw', 'beta_dreg', 'h_dreg'}


def test_rotation_invariance_on_circulant(rng):
    g = build_circulant(24, 4)
    cfg = IsingTestConfig(g, threshold=0.5, epsilon=0.2)
    for _ in range(20):
        x = sample_uniform_sphere(24, 12, rng)
        base = ising_test(x, cfg)
        for shift in (1, 5, 13):
            rotated = ising_test(SpinConfig(np.roll(x.spins, shift)), cfg)
            assert rotated.verdict == base.verdict
            assert rotated.standardized_stat == pytest.approx(base.standardized_stat)


def test_sphere_label_is_permutation_invariant(rng):
    g = build_random_regular(20, 3, seed=1)
    cfg = IsingTestConfig(g, threshold=0.0, epsilon=0.2)
    x = sample_uniform_sphere(20, 8, rng)
    permuted = SpinConfig(x.spins[rng.permutation(20)])
    assert ising_test(permuted, cfg).sphere_label == ising_test(x, cfg).sphere_label


def test_raising_threshold_never_flips_to_structure(rng):
    g = build_random_regular(40, 4, seed=2)
    thresholds = [-2.0, -0.5, 0.0, 0.7, 1.5, 3.0]
    for _ in range(50):
        x = sample_uniform_sphere(40, int(rng.integers(2, 39)), rng)
        verdicts = [ising_test(x, IsingTestConfig(g, threshold=t, epsilon=0.1)).verdict for t in thresholds]
        for earlier, later in zip(verdicts, verdicts[1:]):
            assert not (earlier == H0 and later == H1)


def test_ergm_empty_graph_leaves_band():
    d = ergm_test(GraphSample(4), ErgmTestConfig(4, threshold=0.0, delta=0.2))
    assert d.verdict == H1 and d.sphere_label == 0


def test_ergm_examples():
    cfg = ErgmTestConfig(4, threshold=0.0, delta=0.2)
    disjoint = ergm_test(GraphSample.from_edges(4, [(0, 1), (2, 3)]), cfg)
    assert disjoint.standardized_stat == pytest.approx(-2.0)
    assert disjoint.verdict == H0

    path = ergm_test(GraphSample.from_edges(4, [(0, 1), (1, 2)]), ErgmTestConfig(4, threshold=0.4, delta=0.2))
    assert path.standardized_stat == pytest.approx(0.5)
    assert path.verdict == H1


def test_ergm_config_validation():
    with pytest.raises(ConfigurationError):
        ErgmTestConfig(10, threshold=0.0, delta=0.6)


def test_decision_serializes():
    d = ergm_test(GraphSample.from_edges(4, [(0, 1), (2, 3)]), ErgmTestConfig(4, threshold=0.0, delta=0.2))
    out = d.to_dict()
    assert out['verdict'] == H0 and out['in_band'] is True and out['sphere_label'] == 2


def test_vectorized_decisions():
    z = np.array([0.1, 2.0, np.nan, -1.0])
    in_band = np.array([True, True, False, True])
    assert decide(z, in_band, 1.0).tolist() == [False, True, True, False]


def test_threshold_rule_examples():
    assert threshold_from_rule(float(norm.sf(2.0)), 1000.0, c=1.0) == pytest.approx(1.0, abs=1e-9)
    assert threshold_from_rule(0.5 - 1e-9, 1000.0, c=1.0) == pytest.approx(0.0, abs=1e-8)
    values = [threshold_from_rule(tau, 1000.0, c=1.0) for tau in (0.3, 0.1, 1e-3, 1e-8)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_threshold_rule_includes_rate_term():
    expected = 0.5 * norm.isf(0.01 + math.exp(-5.0))
    assert threshold_from_rule(0.01, 5.0, c=1.0) == pytest.approx(expected)


def test_threshold_rule_infeasible():
    with pytest.raises(InfeasibleThresholdError):
        threshold_from_rule(0.45, 0.5, c=1.0)


def test_threshold_rule_rejects_bad_rate_inputs():
    for L_n in (-1.0, -1e6, float("nan"), float("inf")):
        with pytest.raises(ConfigurationError):
            threshold_from_rule(0.01, L_n, c=1.0)
    with pytest.raises(ConfigurationError):
        threshold_from_rule(0.01, 5.0, c=0.0)
    with pytest.raises(ConfigurationError):
        threshold_from_rule(0.01, 5.0, c=-2.0)


def test_error_bound_examples():
    assert error_bound(0.0, 0.0, 0.0, 3.0, c=1.0) == pytest.approx(2.5)
    bound = error_bound(0.0, 0.0, 3.0, 10 / 3, c=1.0)
    assert bound == pytest.approx(norm.sf(3) + math.exp(-30) / norm.sf(6))
    assert bound >= norm.sf(3)
    for alpha, tau, T in [(0.01, 0.001, 1.2), (0.0, 0.02, 0.8), (0.2, 0.0, 2.0)]:
        assert error_bound(alpha, tau, T, 4.0, c=1.0) >= norm.sf(T)


def test_error_bound_precondition():
    with pytest.raises(InfeasibleThresholdError):
        error_bound(0.0, 0.1, 2.0, 5.0, c=1.0)
