"""
Canonical single-sample tests.

A sample is declared structured (H1) when its sphere label leaves the
admissible band, or when its statistic, standardized by the exact
within-sphere mean and standard deviation, reaches the threshold T.
Nothing about the model parameters enters a decision.
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional, Union

import numpy as np

from shared.config import config
from structest_core.canonical.bands import in_ergm_band, in_ising_band
from structest_core.errors import ConfigurationError
from structest_core.graphs import (
    GraphSample,
    RegularGraph,
    SpinConfig,
    quadratic_form,
    wedge_count,
)
from structest_core.moments import quad_form_moments, wedge_moments

H0 = 'H0'
H1 = 'H1'


@dataclass(frozen=True)
class IsingTestConfig:
    """Test of a spin sample against the Curie-Weiss family"""

    graph: RegularGraph
    threshold: float
    epsilon: float = field(default_factory=lambda: config.epsilon)
    beta_max: float = 1.5
    h_max: float = 0.2

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ConfigurationError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not math.isfinite(self.threshold):
            raise ConfigurationError(f"Threshold must be finite, got {self.threshold}")
        n = self.graph.n
        if not any(in_ising_band(l, n, self.epsilon) for l in range(n + 1)):
            raise ConfigurationError(f"Band [-1+{self.epsilon}, 1-{self.epsilon}] holds no sphere for n={n}")


@dataclass(frozen=True)
class ErgmTestConfig:
    """Test of a graph sample against the Erdős-Rényi family"""

    n: int
    threshold: float
    delta: float = field(default_factory=lambda: config.delta)

    def __post_init__(self):
        if not 0 < self.delta < 0.5:
            raise ConfigurationError(f"delta must lie in (0, 1/2), got {self.delta}")
        if not math.isfinite(self.threshold):
            raise ConfigurationError(f"Threshold must be finite, got {self.threshold}")
        N = self.n * (self.n - 1) // 2
        if not any(in_ergm_band(m, self.n, self.delta) for m in range(N + 1)):
            raise ConfigurationError(f"Edge band for delta={self.delta} is empty at n={self.n}")


@dataclass(frozen=True)
class Decision:
    """Verdict of one canonical test"""

    verdict: str
    sphere_label: Union[float, int]
    threshold_used: float
    standardized_stat: Optional[float] = None

    @property
    def in_band(self) -> bool:
        return self.standardized_stat is not None

    def to_dict(self) -> Dict:
        out = asdict(self)
        out['in_band'] = self.in_band
        return out


def _standardize(value: float, mean: float, variance: float, where: str) -> float:
    if variance <= 0:
        raise ConfigurationError(
            f"Degenerate sphere variance at {where}; widen the band margin so such spheres are excluded"
        )
    return (value - mean) / math.sqrt(variance)


def standardized_ising_stat(x: SpinConfig, graph: RegularGraph) -> float:
    """
    (kappa - E kappa) / sd(kappa) on the sphere of x, kappa = x^T A x.

    kappa is twice the half quadratic form, so the standardized value
    equals that of the half form.
    """
    if x.n != graph.n:
        raise ValueError(f"Configuration has {x.n} sites, graph has {graph.n}")
    moments = quad_form_moments(graph.n, graph.d, x.plus_count)
    kappa = 2 * quadratic_form(graph, x)
    return _standardize(kappa, 2 * moments.mean, 4 * moments.variance,
                        f"l={x.plus_count} (n={graph.n}, d={graph.d})")


def standardized_wedge_stat(s: GraphSample) -> float:
    """(V - E[V | E]) / sd(V | E) for a graph sample"""
    moments = wedge_moments(s.n, s.edge_count)
    return _standardize(wedge_count(s), moments.mean, moments.variance,
                        f"m={s.edge_count} (n={s.n})")


def ising_test(x: SpinConfig, cfg: IsingTestConfig) -> Decision:
    """
    Canonical test of a spin configuration.

    Args:
        x: Observed configuration
        cfg: Graph, band margin and threshold

    Returns:
        Decision; H1 when m(x) leaves [-1+epsilon, 1-epsilon] or the
        standardized statistic is >= T

    Raises:
        ConfigurationError: If the sphere of x lies in the band but has zero variance
    """
    if x.n != cfg.graph.n:
        raise ValueError(f"Configuration has {x.n} sites, graph has {cfg.graph.n}")
    m = x.magnetization
    if not in_ising_band(x.plus_count, x.n, cfg.epsilon):
        return Decision(verdict=H1, sphere_label=m, threshold_used=cfg.threshold)
    z = standardized_ising_stat(x, cfg.graph)
    verdict = H1 if z >= cfg.threshold else H0
    return Decision(verdict=verdict, sphere_label=m, threshold_used=cfg.threshold, standardized_stat=z)


def ergm_test(s: GraphSample, cfg: ErgmTestConfig) -> Decision:
    """
    Canonical test of a graph sample.

    Returns:
        Decision; H1 when E(s) leaves [delta N/2, (1 - delta/2) N] or the
        standardized wedge count is >= T
    """
    if s.n != cfg.n:
        raise ValueError(f"Sample has {s.n} vertices, test expects {cfg.n}")
    m = s.edge_count
    if not in_ergm_band(m, s.n, cfg.delta):
        return Decision(verdict=H1, sphere_label=m, threshold_used=cfg.threshold)
    z = standardized_wedge_stat(s)
    verdict = H1 if z >= cfg.threshold else H0
    return Decision(verdict=verdict, sphere_label=m, threshold_used=cfg.threshold, standardized_stat=z)


def decide(z: np.ndarray, in_band: np.ndarray, threshold: float) -> np.ndarray:
    """Vectorized verdicts (True for H1) from precomputed statistics"""
    return ~in_band | (np.nan_to_num(z, nan=-np.inf) >= threshold)
