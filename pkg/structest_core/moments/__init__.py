"""
structest moments

Exact conditional moments of the test statistics on Hamming spheres,
the KS bound used as tau_n and the Stein-pair regression coefficient.
"""

from .hamming import (
    ConditionalMoments,
    asymptotic_cut_var,
    cut_mean_fraction,
    cut_var_fraction,
    exact_cut_mean,
    exact_cut_var,
    ks_bound,
    ks_bound_ergm,
    quad_form_moments,
    reference_sigma,
    reference_sigma_ergm,
    stein_coefficient,
    wedge_moments,
)

__all__ = [
    'ConditionalMoments', 'asymptotic_cut_var', 'cut_mean_fraction', 'cut_var_fraction',
    'exact_cut_mean', 'exact_cut_var', 'ks_bound', 'ks_bound_ergm', 'quad_form_moments',
    'reference_sigma', 'reference_sigma_ergm', 'stein_coefficient', 'wedge_moments',
]
