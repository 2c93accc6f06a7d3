"""
Conditional moments over Hamming spheres

Exact mean and variance of the cut size T(S) for S uniform among the
size-l subsets of a d-regular graph, of the half quadratic form
x^T A x / 2 = nd/2 - 2T, and of the wedge count V given the edge count
(through the cut of the line graph of K_n). The formulas depend only on
(n, d, l), never on which d-regular graph is used.

Computations run in exact rational arithmetic and are returned as floats.
"""

from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Optional

from shared.config import config
from structest_core.errors import ConfigurationError


@dataclass(frozen=True)
class ConditionalMoments:
    """Mean and variance of a statistic restricted to one sphere"""

    mean: float
    variance: float
    sphere_size: int
    n: int
    d: int

    @property
    def sd(self) -> float:
        return self.variance ** 0.5

    def to_dict(self) -> Dict:
        return asdict(self)


def _falling(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x - i
    return out


def _q(n: int, l: int, a: int, b: int) -> Fraction:
    # P(a fixed vertices in S and b other fixed vertices outside S), |S| = l
    denom = _falling(n, a + b)
    if denom == 0:
        return Fraction(0)
    return Fraction(_falling(l, a) * _falling(n - l, b), denom)


def _check(n: int, d: int, l: int) -> None:
    if not 0 <= d < n:
        raise ConfigurationError(f"Need 0 <= d < n, got n={n}, d={d}")
    if not 0 <= l <= n:
        raise ConfigurationError(f"Sphere size l={l} outside 0..{n}")


@lru_cache(maxsize=65536)
def cut_mean_fraction(n: int, d: int, l: int) -> Fraction:
    """E[T(S)] = l(n-l)d/(n-1) as an exact rational"""
    _check(n, d, l)
    if n == 1:
        return Fraction(0)
    return Fraction(l * (n - l) * d, n - 1)


@lru_cache(maxsize=65536)
def cut_var_fraction(n: int, d: int, l: int) -> Fraction:
    """Exact var(T(S)) from the pair-type decomposition of edge pairs"""
    _check(n, d, l)
    M = n * d // 2
    p1 = 2 * _q(n, l, 1, 1)
    p1_sq = p1 * p1
    shared = n * comb(d, 2)
    disjoint = comb(M, 2) - shared
    var = (M * (p1 - p1_sq)
           + 2 * shared * (_q(n, l, 1, 2) + _q(n, l, 2, 1) - p1_sq)
           + 2 * disjoint * (4 * _q(n, l, 2, 2) - p1_sq))
    return var


def exact_cut_mean(n: int, d: int, l: int) -> float:
    """
    Mean cut size over the size-l subsets of a d-regular graph.

    Args:
        n: Vertex count
        d: Degree (d < n)
        l: Subset size, 0 <= l <= n

    Returns:
        E[T(S)]
    """
    return float(cut_mean_fraction(n, d, l))


def exact_cut_var(n: int, d: int, l: int) -> float:
    """
    Variance of the cut size over the size-l subsets of a d-regular graph.

    Returns:
        var(T(S)), exactly 0 on the spheres l in {0, 1, n-1, n}
    """
    return float(cut_var_fraction(n, d, l))


def quad_form_moments(n: int, d: int, l: int) -> ConditionalMoments:
    """Moments of x^T A x / 2 on the sphere with l plus-spins"""
    mean = Fraction(n * d, 2) - 2 * cut_mean_fraction(n, d, l)
    var = 4 * cut_var_fraction(n, d, l)
    return ConditionalMoments(mean=float(mean), variance=float(var), sphere_size=l, n=n, d=d)


@lru_cache(maxsize=65536)
def _wedge_fractions(n: int, m: int):
    if n < 2:
        raise ConfigurationError(f"Need n >= 2 vertices, got n={n}")
    N = n * (n - 1) // 2
    if not 0 <= m <= N:
        raise ConfigurationError(f"Edge count m={m} outside 0..{N}")
    if N == 1:
        return Fraction(0), Fraction(0)
    mean = Fraction((n - 2) * m * (m - 1), N - 1)
    var = cut_var_fraction(N, 2 * (n - 2), m) / 4
    return mean, var


def wedge_moments(n: int, m: int) -> ConditionalMoments:
    """
    Moments of the wedge count V given exactly m edges on n vertices.

    Uses V = (n-2)m - T_H/2 where T_H is the cut of the edge set in the
    line graph of K_n (N = n(n-1)/2 vertices, degree 2(n-2)).

    Args:
        n: Vertex count
        m: Edge count, 0 <= m <= N

    Returns:
        ConditionalMoments with d set to the line-graph degree 2(n-2)
    """
    mean, var = _wedge_fractions(n, m)
    return ConditionalMoments(mean=float(mean), variance=float(var), sphere_size=m,
                              n=n, d=2 * (n - 2))


def ks_bound(n: int, d: int, constant: Optional[float] = None) -> float:
    """
    Kolmogorov distance bound C (d/n)^(1/4) for the standardized quadratic form.

    Args:
        n: Vertex count
        d: Degree
        constant: C (defaults to config.ks_constant)

    Returns:
        tau_n used by the threshold rule
    """
    if not 0 < d < n:
        raise ConfigurationError(f"Need 0 < d < n, got n={n}, d={d}")
    c = config.ks_constant if constant is None else constant
    if c <= 0:
        raise ConfigurationError(f"KS constant must be positive, got {c}")
    return c * (d / n) ** 0.25


def ks_bound_ergm(n: int, constant: Optional[float] = None) -> float:
    """KS bound for the wedge statistic: the line-graph instance of ks_bound"""
    N = n * (n - 1) // 2
    return ks_bound(N, 2 * (n - 2), constant)


def stein_coefficient(n: int) -> float:
    """
    Regression coefficient a of the swap exchangeable pair.

    Swapping a uniform vertex of S with a uniform vertex outside S (ordered
    pair drawn from [n]^2, no-op when both fall on the same side) gives
    E[T(S') | S] = (1 - a) T(S) + a E T with a = 4(n-1)/n^2.
    """
    return 4 * (n - 1) / n ** 2


def reference_sigma(n: int, d: int) -> float:
    """Standard deviation of the half quadratic form at the central sphere"""
    return quad_form_moments(n, d, round(n / 2)).sd


def reference_sigma_ergm(n: int, p: float) -> float:
    """Standard deviation of the wedge count at the edge count round(pN)"""
    N = n * (n - 1) // 2
    return wedge_moments(n, round(p * N)).sd


def asymptotic_cut_var(n: int, d: int, l: int) -> float:
    """Leading-order variance 2nd s^2 (1-s)^2, s = l/n"""
    s = l / n
    return 2 * n * d * s * s * (1 - s) ** 2
