"""
Exact Gibbs tables for small instances

Every state of the model is enumerated and its Hamiltonian evaluated, the
table is normalized once in log-space. State codes are integers whose bit
i is coordinate i: the spin at site i (1 for +1) or the indicator of the
i-th vertex pair in lexicographic order.
"""

import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.special import logsumexp, xlog1py, xlogy

from shared.config import config
from structest_core.errors import ConfigurationError, EnumerationLimitError
from structest_core.graphs import GraphSample, SpinConfig, pair_arrays, pair_count
from structest_core.samplers import (
    CurieWeissParams,
    DRegIsingParams,
    ErdosRenyiParams,
    ErgmParams,
)

logger = logging.getLogger(__name__)

SPINS = 'spins'
GRAPHS = 'graphs'

CHUNK = 1 << 16


@dataclass(eq=False)
class ExactDistribution:
    """Normalized probability table over a full state space"""

    kind: str
    n: int
    log_probs: np.ndarray
    log_normalizer: float
    labels: np.ndarray

    @property
    def bits(self) -> int:
        """Number of binary coordinates of a state"""
        return self.n if self.kind == SPINS else pair_count(self.n)

    @property
    def probs(self) -> np.ndarray:
        return np.exp(self.log_probs)

    @property
    def size(self) -> int:
        return int(self.log_probs.size)

    def sphere_marginal(self) -> np.ndarray:
        """Probability of each sphere label: #(+1) for spins, #edges for graphs"""
        return np.bincount(self.labels, weights=self.probs, minlength=self.bits + 1)

    def state(self, code: int) -> Union[SpinConfig, GraphSample]:
        bits = (int(code) >> np.arange(self.bits)) & 1
        if self.kind == SPINS:
            return SpinConfig(2 * bits - 1)
        return GraphSample(self.n, bits)

    def code_of(self, state: Union[SpinConfig, GraphSample]) -> int:
        bits = (state.spins > 0) if self.kind == SPINS else state.x
        return int(np.dot(np.asarray(bits, dtype=np.int64), 1 << np.arange(self.bits, dtype=np.int64)))


def state_bits(codes: np.ndarray, width: int) -> np.ndarray:
    """(len(codes), width) 0/1 matrix of the state codes"""
    return ((codes[:, None] >> np.arange(width, dtype=np.int64)) & 1).astype(np.uint8)


def _normalize(kind: str, n: int, log_w: np.ndarray, labels: np.ndarray) -> ExactDistribution:
    log_z = float(logsumexp(log_w))
    return ExactDistribution(kind=kind, n=n, log_probs=log_w - log_z,
                             log_normalizer=log_z, labels=labels)


def _check_spin_cap(n: int) -> None:
    if n > config.max_spin_sites:
        raise EnumerationLimitError(
            f"Exact spin tables are limited to n <= {config.max_spin_sites} sites, got n={n}"
        )


def exact_ising_distribution(params: Union[CurieWeissParams, DRegIsingParams]) -> ExactDistribution:
    """
    Full Gibbs table of a Curie-Weiss or d-regular Ising model.

    Args:
        params: CurieWeissParams or DRegIsingParams

    Returns:
        ExactDistribution over {-1, 1}^n labelled by the plus-count

    Raises:
        EnumerationLimitError: If n exceeds config.max_spin_sites
    """
    n = params.n
    _check_spin_cap(n)
    size = 1 << n
    codes = np.arange(size, dtype=np.int64)
    labels = np.empty(size, dtype=np.int64)
    log_w = np.empty(size, dtype=np.float64)

    if isinstance(params, CurieWeissParams):
        l = np.arange(n + 1)
        m = (2 * l - n) / n
        by_label = 0.5 * params.beta_cw * n * m * m + n * params.h_cw * m
        for start in range(0, size, CHUNK):
            bits = state_bits(codes[start:start + CHUNK], n)
            labels[start:start + CHUNK] = bits.sum(axis=1)
        log_w[:] = by_label[labels]
    elif isinstance(params, DRegIsingParams):
        u, v = params.graph.edge_array
        edges = u.size
        for start in range(0, size, CHUNK):
            bits = state_bits(codes[start:start + CHUNK], n)
            plus = bits.sum(axis=1, dtype=np.int32)
            cut = np.count_nonzero(bits[:, u] != bits[:, v], axis=1).astype(np.int32)
            labels[start:start + CHUNK] = plus
            # sum over edges of x_u x_v is (edges - 2 cut)
            log_w[start:start + CHUNK] = (params.beta * (edges - 2 * cut)
                                          + params.h * (2 * plus - n))
    else:
        raise ConfigurationError(f"Unsupported spin model parameters: {type(params).__name__}")

    logger.debug(f"Enumerated {size} spin states for {type(params).__name__} n={n}")
    return _normalize(SPINS, n, log_w, labels)


def graph_features(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Edge count and wedge count of every graph on n labelled vertices.

    Raises:
        EnumerationLimitError: If n exceeds config.max_graph_vertices
    """
    if n > config.max_graph_vertices:
        raise EnumerationLimitError(
            f"Exact graph tables are limited to n <= {config.max_graph_vertices} vertices, got n={n}"
        )
    N = pair_count(n)
    bits = state_bits(np.arange(1 << N, dtype=np.int64), N).astype(np.int64)
    pair_u, pair_v = pair_arrays(n)
    incidence = np.zeros((N, n), dtype=np.int64)
    incidence[np.arange(N), pair_u] = 1
    incidence[np.arange(N), pair_v] = 1
    degrees = bits @ incidence
    edges = bits.sum(axis=1)
    wedges = (degrees * (degrees - 1) // 2).sum(axis=1)
    return edges, wedges


def exact_ergm_distribution(params: Union[ErgmParams, ErdosRenyiParams, Tuple[int, float]]) -> ExactDistribution:
    """
    Full table of the edge-wedge ERGM or of G(n, p).

    Args:
        params: ErgmParams, ErdosRenyiParams or an (n, p) tuple

    Returns:
        ExactDistribution over the 2^N edge-indicator vectors, labelled by edge count

    Raises:
        EnumerationLimitError: If n exceeds config.max_graph_vertices
    """
    if isinstance(params, tuple):
        params = ErdosRenyiParams(*params)
    n = params.n
    edges, wedges = graph_features(n)

    if isinstance(params, ErgmParams):
        log_w = 2.0 * params.beta1 * edges + params.wedge_weight * wedges
    elif isinstance(params, ErdosRenyiParams):
        N = pair_count(n)
        # xlogy keeps p in {0, 1} finite where the exponent vanishes
        log_w = xlogy(edges, params.p) + xlog1py(N - edges, -params.p)
    else:
        raise ConfigurationError(f"Unsupported graph model parameters: {type(params).__name__}")

    return _normalize(GRAPHS, n, log_w.astype(np.float64), edges)


def sphere_marginal(distribution: ExactDistribution) -> np.ndarray:
    """Law of the sphere label under an exact distribution"""
    return distribution.sphere_marginal()


def tv_distance(a: ExactDistribution, b: ExactDistribution) -> float:
    """
    Total-variation distance between two exact tables.

    Raises:
        ConfigurationError: If the state spaces differ
    """
    if a.kind != b.kind or a.n != b.n:
        raise ConfigurationError(
            f"State spaces differ: {a.kind} on n={a.n} vs {b.kind} on n={b.n}"
        )
    tv = 0.5 * float(np.abs(a.probs - b.probs).sum())
    return min(max(tv, 0.0), 1.0)
