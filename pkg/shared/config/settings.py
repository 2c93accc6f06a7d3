"""
Runtime configuration for structest.
Loads experiment defaults from the environment (and an optional .env file).
"""

import os
from typing import Dict

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

PREFIX = 'STRUCTEST_'


def _read(name: str, default: str) -> str:
    return os.getenv(PREFIX + name, default)


def _read_int(name: str, default: int, minimum: int = 0) -> int:
    raw = _read(name, str(default))
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{PREFIX}{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ValueError(f"{PREFIX}{name} must be >= {minimum}, got {value}")
    return value


def _read_float(name: str, default: float, low: float = 0.0, high: float = float('inf'),
                open_low: bool = False) -> float:
    raw = _read(name, repr(default))
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{PREFIX}{name} must be a number, got {raw!r}")
    if value < low or value > high or (open_low and value == low):
        raise ValueError(f"{PREFIX}{name}={value} is outside its admissible range")
    return value


class Config:
    """Configuration container for structest"""

    def __init__(self):
        self.seed = _read_int('SEED', 20240601)

        # Constants the threshold rule leaves unspecified
        self.ks_constant = _read_float('KS_CONSTANT', 1.0, open_low=True)
        self.rate_constant = _read_float('RATE_CONSTANT', 1.0, open_low=True)
        self.moment_slack = _read_float('MOMENT_SLACK', 8.0, open_low=True)

        # Sampling budgets
        self.retry_factor = _read_int('RETRY_FACTOR', 10, minimum=1)
        self.sweep_factor = _read_float('SWEEP_FACTOR', 50.0, open_low=True)
        self.replicates = _read_int('REPLICATES', 2000, minimum=1)
        self.workers = _read_int('WORKERS', 1, minimum=1)
        self.mc_draws = _read_int('MC_DRAWS', 1_000_000, minimum=1)

        # Enumeration caps
        self.max_spin_sites = _read_int('MAX_SPIN_SITES', 20, minimum=1)
        self.max_graph_vertices = _read_int('MAX_GRAPH_VERTICES', 5, minimum=2)
        self.sphere_enumeration_cap = _read_int('SPHERE_ENUMERATION_CAP', 10_000_000, minimum=1)

        # Test bands
        self.epsilon = _read_float('EPSILON', 0.1, high=1.0, open_low=True)
        self.delta = _read_float('DELTA', 0.1, high=0.5, open_low=True)

        self.results_dir = _read('RESULTS_DIR', 'results')
        self.log_level = _read('LOG_LEVEL', 'INFO').upper()

        if self.epsilon >= 1.0:
            raise ValueError(f"{PREFIX}EPSILON must be < 1, got {self.epsilon}")
        if self.delta >= 0.5:
            raise ValueError(f"{PREFIX}DELTA must be < 0.5, got {self.delta}")

    def as_dict(self) -> Dict:
        """Return the resolved settings (embedded in report sidecars)"""
        return {
            'seed': self.seed,
            'ks_constant': self.ks_constant,
            'rate_constant': self.rate_constant,
            'moment_slack': self.moment_slack,
            'retry_factor': self.retry_factor,
            'sweep_factor': self.sweep_factor,
            'replicates': self.replicates,
            'workers': self.workers,
            'mc_draws': self.mc_draws,
            'max_spin_sites': self.max_spin_sites,
            'max_graph_vertices': self.max_graph_vertices,
            'sphere_enumeration_cap': self.sphere_enumeration_cap,
            'epsilon': self.epsilon,
            'delta': self.delta,
            'results_dir': self.results_dir,
            'log_level': self.log_level,
        }


# Global config instance
config = Config()
