"""
Model parameters for the four families: Curie-Weiss, d-regular Ising,
Erdős-Rényi and the edge-wedge ERGM.
"""

from dataclasses import asdict, dataclass
from typing import Dict

import numpy as np

from structest_core.errors import ConfigurationError
from structest_core.graphs import RegularGraph


@dataclass(frozen=True)
class CurieWeissParams:
    """p(x) ∝ exp((beta_cw/2) n m^2 + n h_cw m)"""

    n: int
    beta_cw: float
    h_cw: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError(f"Curie-Weiss model needs n >= 1, got {self.n}")
        if not (np.isfinite(self.beta_cw) and self.beta_cw >= 0):
            raise ConfigurationError(f"beta_cw must be finite and >= 0, got {self.beta_cw}")
        if not np.isfinite(self.h_cw):
            raise ConfigurationError(f"h_cw must be finite, got {self.h_cw}")

    def check_admissible(self, beta_max: float, h_max: float) -> None:
        """Raise unless the parameters lie in the null box [0, beta_max] x [-h_max, h_max]"""
        if self.beta_cw > beta_max or abs(self.h_cw) > h_max:
            raise ConfigurationError(
                f"Null parameters (beta_cw={self.beta_cw}, h_cw={self.h_cw}) leave the "
                f"admissible box beta <= {beta_max}, |h| <= {h_max}"
            )

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass(frozen=True)
class DRegIsingParams:
    """q(x) ∝ exp((beta/2) x^T A x + n h m(x)) on a d-regular graph"""

    graph: RegularGraph
    beta: float
    h: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.beta) and self.beta >= 0):
            raise ConfigurationError(f"beta must be finite and >= 0, got {self.beta}")
        if not np.isfinite(self.h):
            raise ConfigurationError(f"h must be finite, got {self.h}")

    @property
    def n(self) -> int:
        return self.graph.n

    def to_dict(self) -> Dict:
        return {'n': self.graph.n, 'd': self.graph.d, 'beta': self.beta, 'h': self.h}


@dataclass(frozen=True)
class ErdosRenyiParams:
    """G(n, p)"""

    n: int
    p: float

    def __post_init__(self):
        if self.n < 2:
            raise ConfigurationError(f"Random graphs need n >= 2, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigurationError(f"Edge probability must lie in [0, 1], got {self.p}")

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass(frozen=True)
class ErgmParams:
    """ERGM with density ∝ exp(2 beta1 E + (2 beta2 / n) V)"""

    n: int
    beta1: float
    beta2: float = 0.0

    def __post_init__(self):
        if self.n < 2:
            raise ConfigurationError(f"Random graphs need n >= 2, got {self.n}")
        if not np.isfinite(self.beta1):
            raise ConfigurationError(f"beta1 must be finite, got {self.beta1}")
        if not (np.isfinite(self.beta2) and self.beta2 >= 0):
            raise ConfigurationError(f"beta2 must be finite and >= 0, got {self.beta2}")

    @property
    def wedge_weight(self) -> float:
        """beta_n = 2 beta2 / n, the coefficient of V in the Hamiltonian"""
        return 2.0 * self.beta2 / self.n

    def to_dict(self) -> Dict:
        return asdict(self)
