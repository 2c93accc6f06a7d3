"""
structest samplers

Seeded samplers for the four model families: exact Curie-Weiss and G(n, p),
Glauber dynamics for the d-regular Ising model and the ERGM.
"""

from .params import CurieWeissParams, DRegIsingParams, ErdosRenyiParams, ErgmParams
from .spins import (
    ChainRun,
    curie_weiss_weights,
    default_sweeps,
    epsilon_for_null_box,
    magnetization_tail,
    mean_field_magnetization,
    run_glauber_ising,
    sample_curie_weiss,
    sample_dreg_ising,
    sample_uniform_sphere,
    uniform_sphere_masks,
)
from .random_graphs import run_glauber_ergm, sample_er, sample_ergm

__all__ = [
    'CurieWeissParams', 'DRegIsingParams', 'ErdosRenyiParams', 'ErgmParams',
    'ChainRun', 'curie_weiss_weights', 'default_sweeps', 'epsilon_for_null_box',
    'magnetization_tail', 'mean_field_magnetization', 'run_glauber_ising',
    'sample_curie_weiss', 'sample_dreg_ising', 'sample_uniform_sphere',
    'uniform_sphere_masks', 'run_glauber_ergm', 'sample_er', 'sample_ergm',
]
