"""
Transition matrices of the single-coordinate heat-bath dynamics.

Built directly from an exact table: coordinate i of state s is resampled
from its conditional law, so s moves to s^i (s with bit i flipped) with
probability pi(s^i) / (pi(s) + pi(s^i)). These are the kernels the
Glauber samplers run; the matrices let tests check reversibility and
stationarity exactly.
"""

from typing import Union

import numpy as np
from scipy.special import expit

from structest_core.errors import EnumerationLimitError
from structest_core.oracle.exact import ExactDistribution, exact_ergm_distribution, exact_ising_distribution
from structest_core.samplers import CurieWeissParams, DRegIsingParams, ErgmParams

MAX_KERNEL_BITS = 10


def _flip_probabilities(dist: ExactDistribution, i: int):
    codes = np.arange(dist.size, dtype=np.int64)
    flipped = codes ^ (1 << i)
    return codes, flipped, expit(dist.log_probs[flipped] - dist.log_probs[codes])


def _check_size(dist: ExactDistribution) -> None:
    if dist.bits > MAX_KERNEL_BITS:
        raise EnumerationLimitError(
            f"Transition matrices are limited to {MAX_KERNEL_BITS} coordinates, got {dist.bits}"
        )


def heat_bath_kernel(dist: ExactDistribution) -> np.ndarray:
    """
    Random-scan kernel: pick one of the B coordinates uniformly, resample it.

    Returns:
        Row-stochastic (2^B, 2^B) matrix
    """
    _check_size(dist)
    B = dist.bits
    P = np.zeros((dist.size, dist.size), dtype=np.float64)
    for i in range(B):
        codes, flipped, prob = _flip_probabilities(dist, i)
        P[codes, flipped] = prob / B
    P[np.diag_indices(dist.size)] = 1.0 - P.sum(axis=1)
    return P


def systematic_sweep_kernel(dist: ExactDistribution) -> np.ndarray:
    """One sweep updating coordinates 0, 1, ..., B-1 in order"""
    _check_size(dist)
    sweep = np.eye(dist.size)
    for i in range(dist.bits):
        codes, flipped, prob = _flip_probabilities(dist, i)
        step = np.zeros_like(sweep)
        step[codes, flipped] = prob
        step[codes, codes] = 1.0 - prob
        sweep = sweep @ step
    return sweep


def glauber_kernel_ising(params: Union[CurieWeissParams, DRegIsingParams]) -> np.ndarray:
    """Random-scan heat-bath kernel of a spin model on <= 10 sites"""
    if params.n > MAX_KERNEL_BITS:
        raise EnumerationLimitError(f"Transition matrices are limited to {MAX_KERNEL_BITS} sites")
    return heat_bath_kernel(exact_ising_distribution(params))


def glauber_kernel_ergm(params: ErgmParams) -> np.ndarray:
    """Random-scan edge-flip kernel of the ERGM (n <= 5)"""
    return heat_bath_kernel(exact_ergm_distribution(params))


def detailed_balance_residual(dist: ExactDistribution, P: np.ndarray) -> float:
    """max |pi(s) P(s, t) - pi(t) P(t, s)|"""
    flow = dist.probs[:, None] * P
    return float(np.abs(flow - flow.T).max())


def stationarity_residual(dist: ExactDistribution, P: np.ndarray) -> float:
    """max |(pi P)(t) - pi(t)|"""
    pi = dist.probs
    return float(np.abs(pi @ P - pi).max())
