"""
Matched mean-field nulls

For a structured model, the mean-field parameters that make it hardest to
tell apart: the Curie-Weiss coupling that carries the same total
interaction as the d-regular model, and the ERGM edge weight whose
likelihood ratio against G(n, p) has a conditional mean depending on the
edge count only through a centered quadratic.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Dict

import numpy as np
from scipy.special import logit
from scipy.stats import binom

from shared.config import config
from structest_core.errors import ConfigurationError
from structest_core.graphs import pair_count
from structest_core.moments import wedge_moments
from structest_core.oracle.exact import graph_features
from structest_core.samplers import CurieWeissParams

logger = logging.getLogger(__name__)


def matched_null_ising(beta_dreg: float, h: float, n: int, d: int) -> CurieWeissParams:
    """
    Curie-Weiss parameters paired with a d-regular Ising model.

    Args:
        beta_dreg: Coupling of the d-regular model
        h: External field (shared by both models)
        n: Number of sites
        d: Degree

    Returns:
        CurieWeissParams with beta_cw = n d beta / (n - 1) and h_cw = h
    """
    if n < 2 or not 0 <= d < n:
        raise ConfigurationError(f"Need n >= 2 and 0 <= d < n, got n={n}, d={d}")
    return CurieWeissParams(n, n * d * beta_dreg / (n - 1), h)


def matched_null_ergm(beta2: float, p: float, n: int) -> float:
    """
    Edge weight beta1 pairing ERGM(beta1, beta2) with G(n, p).

    Returns:
        beta1 = logit(p) / 2 - 2 p (n - 2) beta2 / n
    """
    if not 0 < p < 1:
        raise ConfigurationError(f"p must lie in (0, 1), got {p}")
    if beta2 < 0 or n < 2:
        raise ConfigurationError(f"Need beta2 >= 0 and n >= 2, got beta2={beta2}, n={n}")
    return 0.5 * float(logit(p)) - 2.0 * p * (n - 2) * beta2 / n


def edge_coefficient(n: int, p: float, beta2: float, beta1: float) -> float:
    """
    Coefficient c with log(ERGM / G(n, p)) = (2 beta2 / n)(V + c E) + const.

    With beta2 = 0 the ratio carries no wedge term; the matched value
    -2p(n-2) is returned so g = V + cE stays defined.
    """
    if beta2 == 0:
        return -2.0 * p * (n - 2)
    return (2.0 * beta1 - float(logit(p))) / (2.0 * beta2 / n)


def centered_edge_polynomial(k, N: int, p: float):
    """h(k) = k^2 - (2pN + 1 - 2p) k, whose Binomial(N, p) mean is -p^2 N (N - 1)"""
    k = np.asarray(k, dtype=np.float64)
    return k * k - (2 * p * N + 1 - 2 * p) * k


def _conditional_mean_g(n: int, c: float) -> np.ndarray:
    N = pair_count(n)
    if n <= config.max_graph_vertices:
        edges, wedges = graph_features(n)
        g = wedges + c * edges
        totals = np.bincount(edges, weights=g, minlength=N + 1)
        counts = np.bincount(edges, minlength=N + 1)
        return totals / counts
    return np.array([wedge_moments(n, m).mean + c * m for m in range(N + 1)])


def verify_matched_ergm_identity(n: int, p: float, beta2: float = 0.0) -> float:
    """
    Largest deviation of E[g | E = m] from (n - 2)/(N - 1) h(m) over all m.

    g = V + cE is the wedge-scale log-likelihood ratio with the matched
    beta1. Small n are checked against full enumeration of the graphs,
    larger n against the closed-form wedge moments.
    """
    beta1 = matched_null_ergm(beta2, p, n)
    c = edge_coefficient(n, p, beta2, beta1)
    N = pair_count(n)
    m = np.arange(N + 1)
    target = (n - 2) / (N - 1) * centered_edge_polynomial(m, N, p)
    deviation = float(np.abs(_conditional_mean_g(n, c) - target).max())
    logger.debug(f"Matched identity n={n} p={p} beta2={beta2}: max deviation {deviation:.3e}")
    return deviation


@dataclass(frozen=True)
class SuperConcentrationReport:
    n: int
    p: float
    beta2: float
    beta1: float
    coefficient: float
    expected_h: float
    predicted_expected_h: float
    stein_identity_deviation: float
    var_g: float
    naive_scale: float
    variance_ratio: float
    K: float

    def to_dict(self) -> Dict:
        return asdict(self)


def super_concentration_report(n: int, p: float, beta2: float = 0.0) -> SuperConcentrationReport:
    """
    Exact checks of the variance cancellation behind the ERGM lower bound.

    Under G(n, p) the edge count is Binomial(N, p). The report holds
    - E h(E) next to -p^2 N (N - 1)
    - the largest violation over k of the birth-death identity
      p(1 - k/N)[h(k+1) - h(k)] + (k/N)(1 - p)[h(k-1) - h(k)] = -(2/N) h(k) - 2p^2(N - 1)
    - var(g) for g = V + cE with the matched coefficient, against the
      naive scale var(V) + c^2 var(E) that ignores the cancellation,
      and K = var(g) / n^3

    Args:
        n: Vertex count (>= 3)
        p: Edge probability in (0, 1)
        beta2: Wedge weight used to derive the matched beta1

    Returns:
        SuperConcentrationReport
    """
    if n < 3:
        raise ConfigurationError(f"Wedge statistics need n >= 3, got n={n}")
    beta1 = matched_null_ergm(beta2, p, n)
    c = edge_coefficient(n, p, beta2, beta1)
    N = pair_count(n)
    k = np.arange(N + 1)
    pmf = binom.pmf(k, N, p)
    h = centered_edge_polynomial(k, N, p)

    expected_h = float(pmf @ h)
    h_up = centered_edge_polynomial(k + 1, N, p)
    h_down = centered_edge_polynomial(k - 1, N, p)
    drift = p * (1 - k / N) * (h_up - h) + (k / N) * (1 - p) * (h_down - h)
    stein_dev = float(np.abs(drift - (-(2.0 / N) * h - 2 * p * p * (N - 1))).max())

    wedge = [wedge_moments(n, int(m)) for m in k]
    w_mean = np.array([w.mean for w in wedge])
    w_var = np.array([w.variance for w in wedge])
    g_mean = w_mean + c * k
    var_g = float(pmf @ (w_var + g_mean ** 2) - (pmf @ g_mean) ** 2)
    var_v = float(pmf @ (w_var + w_mean ** 2) - (pmf @ w_mean) ** 2)
    naive = var_v + c * c * N * p * (1 - p)

    return SuperConcentrationReport(
        n=n, p=p, beta2=beta2, beta1=beta1, coefficient=c,
        expected_h=expected_h,
        predicted_expected_h=-p * p * N * (N - 1),
        stein_identity_deviation=stein_dev,
        var_g=var_g,
        naive_scale=naive,
        variance_ratio=var_g / naive if naive > 0 else float('nan'),
        K=var_g / n ** 3,
    )
