"""
structest experiment harness

JSON-configured experiments (threshold curves, CLT sweeps, TV collapse,
calibration), the process-pool fan-out and the CSV/JSON reports.
"""

from .config import MODES, ExperimentConfig, load_experiment_config
from .experiments import (
    RUNNERS,
    calibrate,
    fit_ks_exponent,
    ks_distance,
    risk_lower_bound,
    run_clt_sweep,
    run_ergm_threshold,
    run_experiment,
    run_ising_threshold,
    run_tv_collapse,
)
from .parallel import chunk_ranges, run_tasks
from .report import TIMING_COLUMNS, ExperimentReport, wilson_interval
from .summary import summarize_reports

__all__ = [
    'MODES', 'ExperimentConfig', 'load_experiment_config',
    'RUNNERS', 'calibrate', 'fit_ks_exponent', 'ks_distance', 'risk_lower_bound',
    'run_clt_sweep', 'run_ergm_threshold', 'run_experiment', 'run_ising_threshold',
    'run_tv_collapse', 'chunk_ranges', 'run_tasks',
    'TIMING_COLUMNS', 'ExperimentReport', 'wilson_interval', 'summarize_reports',
]
