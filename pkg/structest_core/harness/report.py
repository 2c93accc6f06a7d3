"""
Experiment reports: a pandas table plus a JSON sidecar.

The CSV holds one row per grid point (UTF-8, header row, minimal quoting);
the sidecar holds the experiment config, the resolved settings, the RNG
scheme and any sweep-level summary. Only the elapsed_s column depends on
the machine.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
import pandas as pd
from scipy.stats import binomtest

from shared.config import config

logger = logging.getLogger(__name__)

TIMING_COLUMNS = ('elapsed_s',)
RNG_SCHEME = ('numpy Philox streams keyed by (seed, grid point, hypothesis, replicate); '
              'sphere draws keyed by (seed, grid point, 0, block)')


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion"""
    if trials == 0:
        return float('nan'), float('nan')
    ci = binomtest(int(successes), int(trials)).proportion_ci(confidence_level=confidence, method='wilson')
    return float(ci.low), float(ci.high)


def rate_columns(prefix: str, hits: np.ndarray) -> Dict:
    """Rate and Wilson bounds of a boolean outcome vector"""
    k, n = int(np.count_nonzero(hits)), int(hits.size)
    low, high = wilson_interval(k, n)
    return {f'{prefix}_rate': k / n, f'{prefix}_ci_low': low, f'{prefix}_ci_high': high}


@dataclass
class ExperimentReport:
    """Rows of one experiment with the metadata needed to reproduce it"""

    mode: str
    rows: pd.DataFrame
    experiment: Dict
    summary: Dict = field(default_factory=dict)

    def deterministic_rows(self) -> pd.DataFrame:
        """The rows without timing columns"""
        return self.rows.drop(columns=[c for c in TIMING_COLUMNS if c in self.rows.columns])

    def sidecar(self) -> Dict:
        return {
            'mode': self.mode,
            'columns': list(self.rows.columns),
            'experiment': self.experiment,
            'settings': config.as_dict(),
            'rng': RNG_SCHEME,
            'summary': self.summary,
        }

    def write(self, prefix: str) -> Tuple[str, str]:
        """
        Write <prefix>.csv and <prefix>.json.

        Returns:
            (csv path, json path)
        """
        directory = os.path.dirname(prefix)
        if directory:
            os.makedirs(directory, exist_ok=True)
        csv_path, json_path = f"{prefix}.csv", f"{prefix}.json"
        self.rows.to_csv(csv_path, index=False, encoding='utf-8')
        with open(json_path, 'w', encoding='utf-8') as f:
            json.dump(self.sidecar(), f, indent=2, default=json_default)
        logger.info(f"Wrote {len(self.rows)} rows to {csv_path}")
        return csv_path, json_path


def json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")
