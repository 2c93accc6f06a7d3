"""
Admissible sphere bands.

Ising: S_n = {m : -1 + epsilon <= m <= 1 - epsilon}, checked on the
plus-count l via 2l >= epsilon n and 2(n - l) >= epsilon n.
ERGM: edge counts in [delta N / 2, (1 - delta/2) N].
"""

import numpy as np

_TOL = 1e-9


def in_ising_band(l: int, n: int, epsilon: float) -> bool:
    """True when the magnetization (2l - n)/n lies in [-1+epsilon, 1-epsilon]"""
    return 2 * l >= epsilon * n - _TOL and 2 * (n - l) >= epsilon * n - _TOL


def ising_band_mask(n: int, epsilon: float) -> np.ndarray:
    """Boolean mask over l = 0..n of the spheres inside the band"""
    l = np.arange(n + 1)
    return (2 * l >= epsilon * n - _TOL) & (2 * (n - l) >= epsilon * n - _TOL)


def in_ergm_band(m: int, n: int, delta: float) -> bool:
    """True when the edge count lies in [delta N/2, (1 - delta/2) N]"""
    N = n * (n - 1) // 2
    return m >= delta * N / 2 - _TOL and m <= (1 - delta / 2) * N + _TOL


def ergm_band_mask(n: int, delta: float) -> np.ndarray:
    N = n * (n - 1) // 2
    m = np.arange(N + 1)
    return (m >= delta * N / 2 - _TOL) & (m <= (1 - delta / 2) * N + _TOL)
