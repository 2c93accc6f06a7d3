"""
Threshold selection and the analytic error bound.

The threshold rule picks T with 1 - Phi(2T) = tau + exp(-c L); the error
bound is alpha + 1 - Phi(T) + tau + exp(-c T L) / (1 - Phi(2T) - tau).
"""

import math
from typing import Optional

from scipy.stats import norm

from shared.config import config
from structest_core.errors import ConfigurationError, InfeasibleThresholdError


def threshold_from_rule(tau_n: float, L_n: float, c: Optional[float] = None) -> float:
    """
    Solve 1 - Phi(2T) = tau_n + exp(-c L_n) for T.

    Args:
        tau_n: KS bound of the standardized statistic
        L_n: Scaling product of the alternative (beta sqrt(nd) or beta2 sqrt(n))
        c: Rate constant (defaults to config.rate_constant)

    Returns:
        T_n = Phi^{-1}(1 - tau_n - exp(-c L_n)) / 2

    Raises:
        ConfigurationError: For tau_n < 0, c <= 0, or L_n negative or not finite
        InfeasibleThresholdError: If tau_n + exp(-c L_n) >= 1/2
    """
    c = config.rate_constant if c is None else c
    if tau_n < 0 or c <= 0 or L_n < 0 or not math.isfinite(L_n):
        raise ConfigurationError(
            f"Need tau_n >= 0, c > 0 and a finite L_n >= 0, got tau_n={tau_n}, c={c}, L_n={L_n}"
        )
    total = tau_n + math.exp(-c * L_n)
    if total >= 0.5:
        raise InfeasibleThresholdError(
            f"tau_n + exp(-c L_n) = {total:.4g} >= 1/2: increase n (smaller tau_n) "
            f"or L_n, or lower the KS constant"
        )
    # isf keeps full precision for tiny tail masses
    return 0.5 * float(norm.isf(total))


def error_bound(alpha_n: float, tau_n: float, T: float, L_n: float,
                c: Optional[float] = None) -> float:
    """
    Analytic upper bound on the worst-case error probability.

    Args:
        alpha_n: Probability of leaving the admissible band under the null
        tau_n: KS bound
        T: Threshold
        L_n: Scaling product
        c: Rate constant (defaults to config.rate_constant)

    Returns:
        alpha_n + 1 - Phi(T) + tau_n + exp(-c T L_n) / (1 - Phi(2T) - tau_n)

    Raises:
        InfeasibleThresholdError: If 1 - Phi(2T) <= tau_n
    """
    c = config.rate_constant if c is None else c
    margin = float(norm.sf(2 * T)) - tau_n
    if margin <= 0:
        raise InfeasibleThresholdError(
            f"1 - Phi(2T) = {norm.sf(2 * T):.4g} does not exceed tau_n = {tau_n:.4g}"
        )
    return alpha_n + float(norm.sf(T)) + tau_n + math.exp(-c * T * L_n) / margin
