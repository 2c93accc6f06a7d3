"""
Experiment configuration

An ExperimentConfig is read from a JSON document whose keys mirror the
dataclass fields. Defaults come from the shared settings; unknown keys
and inconsistent grids are rejected before any sampling starts.
"""

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Dict, List, Optional, Union

from shared.config import config
from structest_core.errors import ConfigurationError

MODES = ('ising-threshold', 'ergm-threshold', 'clt-sweep', 'tv-collapse', 'calibration')
MODELS = ('ising', 'ergm')
GRAPHS = ('random', 'circulant')
SCANS = ('systematic', 'random')

DEFAULT_NULL_BETA = [0.0, 0.5, 1.0, 1.5]
DEFAULT_NULL_H = [-0.2, 0.0, 0.2]
DEFAULT_NULL_P = [0.2, 0.35, 0.5, 0.65, 0.8]


def _as_list(value) -> list:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


@dataclass
class ExperimentConfig:
    """
    One experiment: a mode, an instance grid and the test settings.

    The coupling axis is given either as raw couplings (beta: beta for the
    Ising modes, beta2 for the ERGM modes) or as dimensionless products
    (scaling: beta sqrt(nd), resp. beta2 sqrt(n)). A missing threshold is
    derived from the threshold rule with L (default: the point's product).
    """

    mode: str
    n: List[int]
    d: List[int] = field(default_factory=lambda: [2])
    model: str = 'ising'
    beta: List[float] = field(default_factory=list)
    scaling: List[float] = field(default_factory=list)
    h: float = 0.0
    s: List[float] = field(default_factory=lambda: [0.5])
    p: float = 0.5
    beta1: Optional[float] = None
    replicates: int = field(default_factory=lambda: config.replicates)
    seed: int = field(default_factory=lambda: config.seed)
    sweeps: Optional[int] = None
    scan: str = 'systematic'
    graph: str = 'random'
    epsilon: Union[float, str] = field(default_factory=lambda: config.epsilon)
    alpha_target: float = 0.01
    delta: float = field(default_factory=lambda: config.delta)
    beta_max: float = 1.5
    h_max: float = 0.2
    threshold: Optional[float] = None
    L: Optional[float] = None
    c: Optional[float] = None
    ks_constant: Optional[float] = None
    null_beta: List[float] = field(default_factory=lambda: list(DEFAULT_NULL_BETA))
    null_h: List[float] = field(default_factory=lambda: list(DEFAULT_NULL_H))
    null_p: List[float] = field(default_factory=lambda: list(DEFAULT_NULL_P))
    thresholds: List[float] = field(default_factory=lambda: [0.25 * k for k in range(13)])
    workers: int = field(default_factory=lambda: config.workers)
    output: Optional[str] = None

    def __post_init__(self):
        for name in ('n', 'd', 'beta', 'scaling', 's', 'null_beta', 'null_h', 'null_p', 'thresholds'):
            setattr(self, name, _as_list(getattr(self, name)))
        self.validate()

    @property
    def coupling_axis(self) -> List[float]:
        return self.scaling if self.scaling else self.beta

    @property
    def uses_scaling(self) -> bool:
        return bool(self.scaling)

    @property
    def output_prefix(self) -> str:
        if self.output:
            return self.output
        return os.path.join(config.results_dir, self.mode)

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigurationError(f"Unknown mode {self.mode!r}; expected one of {MODES}")
        if self.model not in MODELS:
            raise ConfigurationError(f"Unknown model {self.model!r}; expected one of {MODELS}")
        if self.graph not in GRAPHS:
            raise ConfigurationError(f"Unknown graph family {self.graph!r}; expected one of {GRAPHS}")
        if self.scan not in SCANS:
            raise ConfigurationError(f"Unknown scan {self.scan!r}; expected one of {SCANS}")
        if self.replicates < 1:
            raise ConfigurationError(f"replicates must be >= 1, got {self.replicates}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        if self.seed < 0:
            raise ConfigurationError(f"seed must be non-negative, got {self.seed}")
        if self.sweeps is not None and self.sweeps < 1:
            raise ConfigurationError(f"sweeps must be >= 1, got {self.sweeps}")
        if not self.n or any(int(v) != v or v < 2 for v in self.n):
            raise ConfigurationError(f"n grid must be a nonempty list of integers >= 2, got {self.n}")
        if self.beta and self.scaling:
            raise ConfigurationError("Give either beta or scaling, not both")
        if any(v < 0 or not math.isfinite(v) for v in self.coupling_axis):
            raise ConfigurationError(f"Couplings must be finite and >= 0, got {self.coupling_axis}")
        if isinstance(self.epsilon, str):
            if self.epsilon != 'auto':
                raise ConfigurationError(f"epsilon must be a number or 'auto', got {self.epsilon!r}")
        elif not 0 < self.epsilon < 1:
            raise ConfigurationError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0 < self.alpha_target < 1:
            raise ConfigurationError(f"alpha_target must lie in (0, 1), got {self.alpha_target}")
        if not 0 < self.delta < 0.5:
            raise ConfigurationError(f"delta must lie in (0, 1/2), got {self.delta}")
        if self.threshold is not None and not math.isfinite(self.threshold):
            raise ConfigurationError(f"threshold must be finite, got {self.threshold}")

        needs_axis = self.mode in ('ising-threshold', 'ergm-threshold', 'tv-collapse')
        if needs_axis and not self.coupling_axis:
            raise ConfigurationError(f"Mode {self.mode} needs a nonempty beta or scaling grid")

        spin_mode = self.mode in ('ising-threshold', 'clt-sweep') or (
            self.mode in ('tv-collapse', 'calibration') and self.model == 'ising')
        if spin_mode:
            if not self.d:
                raise ConfigurationError("d grid must be nonempty")
            if self.mode != 'clt-sweep':
                if not (self.null_beta and self.null_h) and self.mode != 'tv-collapse':
                    raise ConfigurationError("Null grids null_beta and null_h must be nonempty")
                if any(b < 0 or b > self.beta_max for b in self.null_beta):
                    raise ConfigurationError(f"null_beta must lie in [0, {self.beta_max}], got {self.null_beta}")
                if any(abs(v) > self.h_max for v in self.null_h):
                    raise ConfigurationError(f"null_h must lie in [-{self.h_max}, {self.h_max}], got {self.null_h}")
            if abs(self.h) > self.h_max:
                raise ConfigurationError(f"Alternative field h must lie in [-{self.h_max}, {self.h_max}], got {self.h}")
        else:
            if not self.null_p and self.mode != 'tv-collapse':
                raise ConfigurationError("Null grid null_p must be nonempty")
            if any(not self.delta < v < 1 - self.delta for v in self.null_p):
                raise ConfigurationError(
                    f"null_p must lie in ({self.delta}, {1 - self.delta}), got {self.null_p}"
                )
            if not 0 < self.p < 1:
                raise ConfigurationError(f"p must lie in (0, 1), got {self.p}")

        if self.mode == 'clt-sweep' and (not self.s or any(not 0 < v < 1 for v in self.s)):
            raise ConfigurationError(f"Sphere fractions s must lie in (0, 1), got {self.s}")
        if self.mode == 'calibration' and not self.thresholds:
            raise ConfigurationError("calibration needs a nonempty thresholds grid")

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> 'ExperimentConfig':
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"Unknown experiment keys: {sorted(unknown)}")
        if 'mode' not in data or 'n' not in data:
            raise ConfigurationError("Experiment config needs at least 'mode' and 'n'")
        return cls(**data)


def load_experiment_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Read an ExperimentConfig from a JSON file.

    Raises:
        ConfigurationError: If the file is missing, not JSON, or invalid
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigurationError(f"Experiment config not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Experiment config {path} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise ConfigurationError(f"Experiment config {path} must hold a JSON object")
    return ExperimentConfig.from_dict(data)
