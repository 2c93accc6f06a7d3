"""
Spin-model samplers

- Uniform sampling on a Hamming sphere
- Exact Curie-Weiss sampling (magnetization first, then a uniform sphere point)
- Glauber dynamics for the Ising model on a d-regular graph
- Mean-field helpers: w(m) weights, band tail probabilities, the stable
  magnetization and a band margin computed for a null parameter box
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln, logsumexp

from shared.config import config
from structest_core.canonical.bands import ising_band_mask
from structest_core.errors import ConfigurationError
from structest_core.graphs import SpinConfig
from structest_core.samplers.kernels import ising_sweeps
from structest_core.samplers.params import CurieWeissParams, DRegIsingParams

logger = logging.getLogger(__name__)

SCANS = ('systematic', 'random')


@dataclass
class ChainRun:
    """Final chain state plus diagnostics"""

    state: object
    sweeps: int
    scan: str
    energy_trace: Optional[np.ndarray] = None


def default_sweeps(sites: int) -> int:
    """ceil(sweep_factor * ln(sites)), at least one sweep"""
    return max(1, math.ceil(config.sweep_factor * math.log(max(sites, 2))))


def sample_uniform_sphere(n: int, l: int, rng: np.random.Generator) -> SpinConfig:
    """
    Uniform configuration with exactly l plus-spins.

    Args:
        n: Number of sites
        l: Number of +1 coordinates, 0 <= l <= n
        rng: numpy Generator

    Returns:
        SpinConfig
    """
    if not 0 <= l <= n:
        raise ConfigurationError(f"Sphere size l={l} outside 0..{n}")
    plus = rng.choice(n, size=l, replace=False)
    return SpinConfig.from_plus_sites(n, plus)


def uniform_sphere_masks(n: int, l: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Batch of count uniform size-l subsets as a boolean (count, n) matrix"""
    order = rng.random((count, n)).argsort(axis=1)
    masks = np.zeros((count, n), dtype=bool)
    np.put_along_axis(masks, order[:, :l], True, axis=1)
    return masks


@lru_cache(maxsize=1024)
def _log_weights(params: CurieWeissParams) -> np.ndarray:
    n = params.n
    l = np.arange(n + 1)
    m = (2 * l - n) / n
    log_w = (gammaln(n + 1) - gammaln(l + 1) - gammaln(n - l + 1)
             + 0.5 * params.beta_cw * n * m * m + n * params.h_cw * m)
    return log_w - logsumexp(log_w)


def curie_weiss_weights(params: CurieWeissParams) -> np.ndarray:
    """
    Exact law of the plus-count under the Curie-Weiss measure.

    Returns:
        Array of length n+1; entry l is P(#(+1) = l), i.e. w(m) at m = (2l-n)/n
    """
    return np.exp(_log_weights(params))


def sample_curie_weiss(params: CurieWeissParams, rng: np.random.Generator) -> SpinConfig:
    """Exact sample: draw the magnetization from w(m), then a uniform point of that sphere"""
    probs = curie_weiss_weights(params)
    l = int(rng.choice(params.n + 1, p=probs))
    return sample_uniform_sphere(params.n, l, rng)


def magnetization_tail(params: CurieWeissParams, epsilon: float) -> float:
    """Exact P(m(x) outside [-1+epsilon, 1-epsilon]) under the Curie-Weiss measure"""
    inside = ising_band_mask(params.n, epsilon)
    return float(np.clip(curie_weiss_weights(params)[~inside].sum(), 0.0, 1.0))


def mean_field_magnetization(beta_cw: float, h_cw: float = 0.0) -> float:
    """
    Stable solution of m = tanh(beta m + h).

    For h = 0 and beta > 1 the positive root is returned; for h = 0 and
    beta <= 1 the only solution is 0.
    """
    if h_cw == 0.0:
        if beta_cw <= 1.0:
            return 0.0
        return brentq(lambda m: m - np.tanh(beta_cw * m), 1e-9, 1.0)
    sign = 1.0 if h_cw > 0 else -1.0
    h = abs(h_cw)
    return sign * brentq(lambda m: m - np.tanh(beta_cw * m + h), 0.0, 1.0)


def epsilon_for_null_box(n: int, beta_max: float, h_max: float, alpha_target: float = 0.01,
                         extra_nulls: Sequence[CurieWeissParams] = ()) -> float:
    """
    Widest band margin whose exact tail mass stays below alpha_target.

    Candidates are epsilon = 2k/n (band edges on the magnetization grid),
    k >= 2 so that the degenerate spheres l in {0, 1, n-1, n} are excluded.
    The tail is evaluated at the corners (beta_max, 0) and (beta_max, h_max)
    of the null box and at any extra null parameters supplied.

    Raises:
        ConfigurationError: If even k = 2 exceeds alpha_target
    """
    nulls = [CurieWeissParams(n, beta_max, 0.0), CurieWeissParams(n, beta_max, h_max)]
    nulls.extend(extra_nulls)
    weights = [curie_weiss_weights(p) for p in nulls]

    best = None
    for k in range(2, n // 2 + 1):
        alpha = max(float(w[:k].sum() + w[n - k + 1:].sum()) for w in weights)
        if alpha > alpha_target:
            break
        best = k
    if best is None:
        raise ConfigurationError(
            f"No band margin keeps the tail below {alpha_target} for n={n}, "
            f"beta_max={beta_max}, h_max={h_max}"
        )
    epsilon = 2 * best / n
    logger.debug(f"Band margin for n={n}, beta_max={beta_max}, h_max={h_max}: epsilon={epsilon:.4f}")
    return epsilon


def scan_arrays(scan: str, sites: int, total: int, rng: np.random.Generator):
    if scan not in SCANS:
        raise ConfigurationError(f"Unknown scan {scan!r}; expected one of {SCANS}")
    if scan == 'random':
        return rng.integers(0, sites, size=total, dtype=np.int64), False
    return np.zeros(0, dtype=np.int64), True


def run_glauber_ising(params: DRegIsingParams, sweeps: Optional[int], rng: np.random.Generator,
                      init: Optional[SpinConfig] = None, trace: bool = False,
                      scan: str = 'systematic') -> ChainRun:
    """
    Heat-bath dynamics for the d-regular Ising model.

    Each update resamples x_i from P(x_i = +1 | rest) = sigmoid(2 beta sum_j x_j + 2h).

    Args:
        params: Model parameters
        sweeps: Number of sweeps of n updates (None for default_sweeps(n))
        rng: numpy Generator
        init: Starting configuration (default: uniform random spins)
        trace: Record the Hamiltonian after every sweep
        scan: 'systematic' (sites in index order) or 'random'

    Returns:
        ChainRun with the final SpinConfig
    """
    n = params.graph.n
    sweeps = default_sweeps(n) if sweeps is None else sweeps
    if sweeps < 1:
        raise ConfigurationError(f"Need at least one sweep, got {sweeps}")

    if init is None:
        spins = np.where(rng.random(n) < 0.5, 1, -1).astype(np.int8)
    else:
        if init.n != n:
            raise ConfigurationError(f"Initial state has {init.n} sites, graph has {n}")
        spins = init.spins.copy()

    total = sweeps * n
    sites, systematic = scan_arrays(scan, n, total, rng)
    uniforms = rng.random(total)
    energies = np.zeros(sweeps if trace else 0, dtype=np.float64)
    indptr, indices = params.graph.csr

    ising_sweeps(spins, indptr, indices, sites, uniforms, systematic,
                 float(params.beta), float(params.h), energies)

    if trace:
        logger.debug(f"Ising chain n={n} beta={params.beta}: final energy {energies[-1]:.3f} "
                     f"after {sweeps} sweeps")
    return ChainRun(state=SpinConfig(spins), sweeps=sweeps, scan=scan,
                    energy_trace=energies if trace else None)


def sample_dreg_ising(params: DRegIsingParams, sweeps: Optional[int], rng: np.random.Generator,
                      scan: str = 'systematic') -> SpinConfig:
    """Approximate sample from the d-regular Ising model (final Glauber state)"""
    return run_glauber_ising(params, sweeps, rng, scan=scan).state
