"""
Random-graph samplers: G(n, p) and the edge-wedge ERGM.
"""

import logging
from typing import Optional

import numpy as np
from scipy.special import expit

from structest_core.errors import ConfigurationError
from structest_core.graphs import GraphSample, pair_arrays, pair_count, wedge_count
from structest_core.samplers.kernels import ergm_sweeps
from structest_core.samplers.params import ErgmParams, ErdosRenyiParams
from structest_core.samplers.spins import ChainRun, scan_arrays, default_sweeps

logger = logging.getLogger(__name__)


def sample_er(n: int, p: float, rng: np.random.Generator) -> GraphSample:
    """
    G(n, p): N = n(n-1)/2 independent Bernoulli(p) edge indicators.

    Args:
        n: Vertex count
        p: Edge probability in [0, 1]
        rng: numpy Generator

    Returns:
        GraphSample
    """
    params = ErdosRenyiParams(n, p)
    bits = rng.random(pair_count(params.n)) < params.p
    return GraphSample(params.n, bits)


def run_glauber_ergm(params: ErgmParams, sweeps: Optional[int], rng: np.random.Generator,
                     init: Optional[GraphSample] = None, trace: bool = False,
                     scan: str = 'systematic') -> ChainRun:
    """
    Edge-flip heat-bath dynamics for the ERGM.

    The presence of pair {u, v} is resampled with log-odds
    2 beta1 + (2 beta2 / n) w, where w = deg(u) + deg(v) excluding {u, v}
    is the number of wedges the pair would close with the rest of the graph.

    Args:
        params: Model parameters
        sweeps: Number of sweeps of N pair updates (None for default_sweeps(N))
        rng: numpy Generator
        init: Starting graph (default: G(n, sigmoid(2 beta1)))
        trace: Record the Hamiltonian after every sweep
        scan: 'systematic' (pairs in lexicographic order) or 'random'

    Returns:
        ChainRun with the final GraphSample
    """
    n = params.n
    N = pair_count(n)
    sweeps = default_sweeps(N) if sweeps is None else sweeps
    if sweeps < 1:
        raise ConfigurationError(f"Need at least one sweep, got {sweeps}")

    if init is None:
        init = sample_er(n, float(expit(2.0 * params.beta1)), rng)
    elif init.n != n:
        raise ConfigurationError(f"Initial graph has {init.n} vertices, model has {n}")

    adj = init.adjacency_matrix()
    deg = init.degrees.astype(np.int64).copy()
    counts = np.array([init.edge_count, wedge_count(init)], dtype=np.int64)
    pair_u, pair_v = pair_arrays(n)

    total = sweeps * N
    sites, systematic = scan_arrays(scan, N, total, rng)
    uniforms = rng.random(total)
    energies = np.zeros(sweeps if trace else 0, dtype=np.float64)

    ergm_sweeps(adj, deg, pair_u, pair_v, sites, uniforms, systematic,
                float(params.beta1), float(params.wedge_weight), counts, energies)

    state = GraphSample.from_adjacency(adj)
    if trace:
        logger.debug(f"ERGM chain n={n}: E={counts[0]} V={counts[1]} after {sweeps} sweeps")
    return ChainRun(state=state, sweeps=sweeps, scan=scan,
                    energy_trace=energies if trace else None)


def sample_ergm(params: ErgmParams, sweeps: Optional[int], rng: np.random.Generator,
                scan: str = 'systematic') -> GraphSample:
    """Approximate ERGM sample (final state of the edge-flip chain)"""
    return run_glauber_ergm(params, sweeps, rng, scan=scan).state
