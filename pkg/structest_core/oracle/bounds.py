"""
Brute-force moments and concentration checks

- Exact conditional moments by enumerating a whole sphere
- Central moments and log-MGF of the cut size against the sub-gamma
  bounds, exactly on enumerable instances and by Monte Carlo beyond
- The regression identity of the swap exchangeable pair
"""

import itertools
import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from shared.config import config
from structest_core.errors import ConfigurationError, EnumerationLimitError
from structest_core.graphs import RegularGraph, build_random_regular, cut_size, pair_arrays, pair_count
from structest_core.moments import ConditionalMoments, cut_mean_fraction
from structest_core.oracle.exact import state_bits
from structest_core.rng import stream
from structest_core.samplers import uniform_sphere_masks

logger = logging.getLogger(__name__)

STATISTICS = ('cut', 'quadratic_form', 'wedge')
BATCH = 1 << 15
JACKKNIFE_GROUPS = 20


def _enumeration_cap(count: int, what: str) -> None:
    if count > config.sphere_enumeration_cap:
        raise EnumerationLimitError(
            f"{what} has {count} members, above the enumeration cap {config.sphere_enumeration_cap}"
        )


def _subset_batches(universe: int, size: int):
    combos = itertools.combinations(range(universe), size)
    while True:
        batch = list(itertools.islice(combos, BATCH))
        if not batch:
            return
        idx = np.array(batch, dtype=np.int64).reshape(len(batch), size)
        mask = np.zeros((len(batch), universe), dtype=bool)
        mask[np.arange(len(batch))[:, None], idx] = True
        yield mask


def _cut_histogram(graph: RegularGraph, l: Optional[int]) -> np.ndarray:
    """Counts of each cut value over the size-l subsets, or over all subsets when l is None"""
    u, v = graph.edge_array
    hist = np.zeros(u.size + 1, dtype=np.int64)
    if l is None:
        size = 1 << graph.n
        _enumeration_cap(size, f"The subset lattice of n={graph.n}")
        codes = np.arange(size, dtype=np.int64)
        batches = (state_bits(codes[s:s + BATCH], graph.n).astype(bool) for s in range(0, size, BATCH))
    else:
        _enumeration_cap(comb(graph.n, l), f"Sphere l={l} of n={graph.n}")
        batches = _subset_batches(graph.n, l)
    for mask in batches:
        cuts = np.count_nonzero(mask[:, u] != mask[:, v], axis=1)
        hist += np.bincount(cuts, minlength=hist.size)
    return hist


def _wedge_histogram(n: int, m: int) -> np.ndarray:
    N = pair_count(n)
    _enumeration_cap(comb(N, m), f"Edge sphere m={m} of n={n}")
    pair_u, pair_v = pair_arrays(n)
    incidence = np.zeros((N, n), dtype=np.int64)
    incidence[np.arange(N), pair_u] = 1
    incidence[np.arange(N), pair_v] = 1
    hist = np.zeros(n * comb(n - 1, 2) + 1, dtype=np.int64)
    for mask in _subset_batches(N, m):
        degrees = mask.astype(np.int64) @ incidence
        wedges = (degrees * (degrees - 1) // 2).sum(axis=1)
        hist += np.bincount(wedges, minlength=hist.size)
    return hist


def _histogram_moments(values: np.ndarray, hist: np.ndarray) -> Tuple[Fraction, Fraction]:
    total = int(hist.sum())
    s1 = sum(int(c) * int(x) for x, c in zip(values, hist) if c)
    s2 = sum(int(c) * int(x) ** 2 for x, c in zip(values, hist) if c)
    mean = Fraction(s1, total)
    return mean, Fraction(s2, total) - mean * mean


def conditional_moments_oracle(statistic: str, sphere: int, graph: Optional[RegularGraph] = None,
                               n: Optional[int] = None) -> ConditionalMoments:
    """
    Mean and variance of a statistic over one sphere by exhaustive enumeration.

    Args:
        statistic: 'cut', 'quadratic_form' (both need graph) or 'wedge' (needs n)
        sphere: Subset size l, or edge count m for 'wedge'
        graph: Interaction graph for the spin statistics
        n: Vertex count for the wedge statistic

    Returns:
        ConditionalMoments computed with exact integer sums

    Raises:
        EnumerationLimitError: If the sphere exceeds config.sphere_enumeration_cap
    """
    if statistic not in STATISTICS:
        raise ConfigurationError(f"Unknown statistic {statistic!r}; expected one of {STATISTICS}")

    if statistic == 'wedge':
        if n is None or n < 2:
            raise ConfigurationError("The wedge statistic needs the vertex count n >= 2")
        if not 0 <= sphere <= pair_count(n):
            raise ConfigurationError(f"Edge count m={sphere} outside 0..{pair_count(n)}")
        hist = _wedge_histogram(n, sphere)
        mean, var = _histogram_moments(np.arange(hist.size), hist)
        return ConditionalMoments(mean=float(mean), variance=float(var), sphere_size=sphere,
                                  n=n, d=2 * (n - 2))

    if graph is None:
        raise ConfigurationError(f"The {statistic} statistic needs a graph")
    if not 0 <= sphere <= graph.n:
        raise ConfigurationError(f"Sphere size l={sphere} outside 0..{graph.n}")
    hist = _cut_histogram(graph, sphere)
    values = np.arange(hist.size)
    if statistic == 'quadratic_form':
        values = graph.n * graph.d // 2 - 2 * values
    mean, var = _histogram_moments(values, hist)
    return ConditionalMoments(mean=float(mean), variance=float(var), sphere_size=sphere,
                              n=graph.n, d=graph.d)


def moment_bound(q: int, n: int, d: int, slack: float) -> float:
    """2 (2q)! (C n d)^q"""
    return 2.0 * math.factorial(2 * q) * (slack * n * d) ** q


def mgf_bound(gamma: float, n: int, d: int) -> float:
    """32 n d gamma^2 / (1 - 16 n d gamma^2), finite for |gamma| < 1/(4 sqrt(nd))"""
    x = 16.0 * n * d * gamma * gamma
    if x >= 1:
        return math.inf
    return 2.0 * x / (1.0 - x)


def admissible_gammas(n: int, d: int, points: int = 9, fraction: float = 0.9) -> np.ndarray:
    """Symmetric grid inside the window |gamma| < 1/(4 sqrt(nd))"""
    limit = fraction / (4.0 * math.sqrt(n * d))
    return np.linspace(-limit, limit, points)


@dataclass
class MomentBoundReport:
    """Central moments and log-MGF of T - E T against the sub-gamma bounds"""

    n: int
    d: int
    sphere: Optional[int]
    method: str
    draws: int
    slack: float
    mean: float
    moments: List[Dict] = field(default_factory=list)
    mgf: List[Dict] = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        return any(r['exceeds'] for r in self.moments) or any(r['exceeds'] for r in self.mgf)

    def to_dict(self) -> Dict:
        out = asdict(self)
        out['flagged'] = self.flagged
        return out


def _jackknife(per_draw: np.ndarray) -> Tuple[float, float]:
    groups = np.array_split(per_draw, JACKKNIFE_GROUPS)
    sums = np.array([g.sum() for g in groups])
    sizes = np.array([g.size for g in groups])
    estimate = sums.sum() / sizes.sum()
    leave_out = (sums.sum() - sums) / (sizes.sum() - sizes)
    G = len(groups)
    stderr = math.sqrt((G - 1) / G * float(((leave_out - leave_out.mean()) ** 2).sum()))
    return float(estimate), stderr


def _monte_carlo_cuts(graph: RegularGraph, l: Optional[int], draws: int,
                      rng: np.random.Generator) -> np.ndarray:
    u, v = graph.edge_array
    out = np.empty(draws, dtype=np.int64)
    for start in range(0, draws, BATCH):
        count = min(BATCH, draws - start)
        if l is None:
            mask = rng.random((count, graph.n)) < 0.5
        else:
            mask = uniform_sphere_masks(graph.n, l, count, rng)
        out[start:start + count] = np.count_nonzero(mask[:, u] != mask[:, v], axis=1)
    return out


def moment_bound_check(n: int, d: int, l: Optional[int] = None, q_max: int = 3,
                       slack: Optional[float] = None, draws: Optional[int] = None,
                       seed: Optional[int] = None, graph: Optional[RegularGraph] = None,
                       gammas: Optional[Sequence[float]] = None) -> MomentBoundReport:
    """
    Compare the 2q-th central moments and the log-MGF of the cut size
    with the sub-gamma bounds.

    For q = 1..q_max the report holds E(T - ET)^{2q} and the ratio to
    2 (2q)! (C n d)^q; for each gamma in the admissible window it holds
    log E exp(gamma (T - ET)) next to 32 n d gamma^2 / (1 - 16 n d gamma^2).
    Ratios above 1 and curve crossings are flagged.

    Args:
        n: Vertex count
        d: Degree
        l: Sphere size; None draws S uniformly from all subsets instead
        q_max: Highest moment order
        slack: C (defaults to config.moment_slack)
        draws: Monte Carlo draws when the subsets cannot be enumerated
            (defaults to config.mc_draws)
        seed: Seed for the graph and the Monte Carlo stream (defaults to config.seed)
        graph: Graph to use (default: random d-regular graph from seed)
        gammas: Log-MGF evaluation points (default: 9 points spanning 90% of the window)

    Returns:
        MomentBoundReport
    """
    slack = config.moment_slack if slack is None else slack
    draws = config.mc_draws if draws is None else draws
    seed = config.seed if seed is None else seed
    if q_max < 1 or slack <= 0 or draws < JACKKNIFE_GROUPS:
        raise ConfigurationError(
            f"Need q_max >= 1, slack > 0 and at least {JACKKNIFE_GROUPS} draws, "
            f"got q_max={q_max}, slack={slack}, draws={draws}"
        )
    if graph is None:
        graph = build_random_regular(n, d, seed=seed)
    elif (graph.n, graph.d) != (n, d):
        raise ConfigurationError(f"Graph is ({graph.n}, {graph.d})-regular, expected ({n}, {d})")
    if l is not None and not 0 <= l <= n:
        raise ConfigurationError(f"Sphere size l={l} outside 0..{n}")
    gammas = admissible_gammas(n, d) if gammas is None else np.asarray(gammas, dtype=np.float64)

    if l is None:
        mean = Fraction(n * d, 4)
        population = 1 << n
    else:
        mean = cut_mean_fraction(n, d, l)
        population = comb(n, l)

    report = MomentBoundReport(n=n, d=d, sphere=l, method='exact', draws=0,
                               slack=slack, mean=float(mean))

    if population <= config.sphere_enumeration_cap:
        hist = _cut_histogram(graph, l)
        total = int(hist.sum())
        values = np.arange(hist.size)
        support = hist > 0
        report.draws = total
        for q in range(1, q_max + 1):
            exact = sum(int(c) * (int(x) - mean) ** (2 * q) for x, c in zip(values, hist) if c) / total
            _moment_row(report, q, float(exact), 0.0)
        deviations = values[support] - float(mean)
        weights = hist[support].astype(np.float64)
        for gamma in gammas:
            log_mgf = float(logsumexp(gamma * deviations, b=weights) - math.log(total))
            _mgf_row(report, float(gamma), log_mgf)
    else:
        rng = stream(seed, n, d, n + 1 if l is None else l)
        cuts = _monte_carlo_cuts(graph, l, draws, rng)
        deviations = cuts - float(mean)
        report.method = 'monte-carlo'
        report.draws = draws
        for q in range(1, q_max + 1):
            estimate, stderr = _jackknife(deviations ** (2 * q))
            _moment_row(report, q, estimate, stderr)
        for gamma in gammas:
            log_mgf = float(logsumexp(gamma * deviations) - math.log(draws))
            _mgf_row(report, float(gamma), log_mgf)

    if report.flagged:
        logger.warning(f"Moment bounds exceeded at n={n}, d={d}, l={l} with slack {slack}")
    return report


def _moment_row(report: MomentBoundReport, q: int, value: float, stderr: float) -> None:
    bound = moment_bound(q, report.n, report.d, report.slack)
    ratio = value / bound
    report.moments.append({'q': q, 'central_moment': value, 'stderr': stderr,
                           'bound': bound, 'ratio': ratio, 'exceeds': ratio > 1})


def _mgf_row(report: MomentBoundReport, gamma: float, log_mgf: float) -> None:
    bound = mgf_bound(gamma, report.n, report.d)
    report.mgf.append({'gamma': gamma, 'log_mgf': log_mgf, 'bound': bound,
                       'exceeds': log_mgf > bound + 1e-12})


def stein_pair_regression(graph: RegularGraph, subset) -> Tuple[float, float]:
    """
    Conditional mean of the cut after one swap move, by enumerating all n^2 moves.

    An ordered pair (I, J) is drawn uniformly from [n]^2; when exactly one
    of I, J lies in S their memberships are exchanged, otherwise S is kept.

    Returns:
        (E[T(S') | S], (1 - a) T(S) + a E T) with a = 4(n - 1)/n^2
    """
    n = graph.n
    members = sorted({int(v) for v in subset})
    inside = np.zeros(n, dtype=bool)
    inside[members] = True
    base = cut_size(graph, inside)

    total = 0
    for i in range(n):
        for j in range(n):
            if inside[i] == inside[j]:
                total += base
                continue
            swapped = inside.copy()
            swapped[i], swapped[j] = inside[j], inside[i]
            total += cut_size(graph, swapped)

    a = Fraction(4 * (n - 1), n * n)
    predicted = (1 - a) * base + a * cut_mean_fraction(n, graph.d, len(members))
    return float(Fraction(total, n * n)), float(predicted)
