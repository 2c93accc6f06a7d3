"""
structest canonical tests

Single-sample decisions for the Ising and ERGM settings, the admissible
bands, and the threshold rule with its analytic error bound.
"""

from .bands import ergm_band_mask, in_ergm_band, in_ising_band, ising_band_mask
from .decision import (
    H0,
    H1,
    Decision,
    ErgmTestConfig,
    IsingTestConfig,
    decide,
    ergm_test,
    ising_test,
    standardized_ising_stat,
    standardized_wedge_stat,
)
from .threshold import error_bound, threshold_from_rule

__all__ = [
    'ergm_band_mask', 'in_ergm_band', 'in_ising_band', 'ising_band_mask',
    'H0', 'H1', 'Decision', 'ErgmTestConfig', 'IsingTestConfig', 'decide',
    'ergm_test', 'ising_test', 'standardized_ising_stat', 'standardized_wedge_stat',
    'error_bound', 'threshold_from_rule',
]
