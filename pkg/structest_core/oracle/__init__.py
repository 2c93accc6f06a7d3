"""
structest exact oracle

Brute-force ground truth on small instances: exact Gibbs tables and
total-variation distances, heat-bath transition matrices, matched
mean-field nulls, enumerated sphere moments and the concentration checks.
"""

from .exact import (
    GRAPHS,
    SPINS,
    ExactDistribution,
    exact_ergm_distribution,
    exact_ising_distribution,
    graph_features,
    sphere_marginal,
    tv_distance,
)
from .kernels import (
    detailed_balance_residual,
    glauber_kernel_ergm,
    glauber_kernel_ising,
    heat_bath_kernel,
    stationarity_residual,
    systematic_sweep_kernel,
)
from .matching import (
    SuperConcentrationReport,
    centered_edge_polynomial,
    edge_coefficient,
    matched_null_ergm,
    matched_null_ising,
    super_concentration_report,
    verify_matched_ergm_identity,
)
from .bounds import (
    MomentBoundReport,
    admissible_gammas,
    conditional_moments_oracle,
    mgf_bound,
    moment_bound,
    moment_bound_check,
    stein_pair_regression,
)

__all__ = [
    'GRAPHS', 'SPINS', 'ExactDistribution', 'exact_ergm_distribution', 'exact_ising_distribution',
    'graph_features', 'sphere_marginal', 'tv_distance',
    'detailed_balance_residual', 'glauber_kernel_ergm', 'glauber_kernel_ising', 'heat_bath_kernel',
    'stationarity_residual', 'systematic_sweep_kernel',
    'SuperConcentrationReport', 'centered_edge_polynomial', 'edge_coefficient', 'matched_null_ergm',
    'matched_null_ising', 'super_concentration_report', 'verify_matched_ergm_identity',
    'MomentBoundReport', 'admissible_gammas', 'conditional_moments_oracle', 'mgf_bound',
    'moment_bound', 'moment_bound_check', 'stein_pair_regression',
]
