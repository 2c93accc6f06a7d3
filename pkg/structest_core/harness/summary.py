"""
Aggregation of threshold-experiment CSVs across runs.
"""

import logging
from pathlib import Path
from typing import Iterable, Union

import pandas as pd

from structest_core.errors import ConfigurationError

logger = logging.getLogger(__name__)

REQUIRED = ('n', 'scaling', 'type1_rate', 'type2_rate', 'risk')


def summarize_reports(paths: Iterable[Union[str, Path]]) -> pd.DataFrame:
    """
    Worst-case risk per (source, n, scaling product) over threshold reports.

    Args:
        paths: CSV files written by run_ising_threshold / run_ergm_threshold

    Returns:
        DataFrame with columns source, n, scaling, type1_rate, type2_rate,
        risk, replicates, sorted by source, n and scaling

    Raises:
        ConfigurationError: If no path is given or a file lacks the rate columns
    """
    frames = []
    for path in paths:
        frame = pd.read_csv(path)
        missing = [c for c in REQUIRED if c not in frame.columns]
        if missing:
            raise ConfigurationError(f"{path} is not a threshold report (missing {missing})")
        frame['source'] = Path(path).stem
        frames.append(frame)
    if not frames:
        raise ConfigurationError("No report files given")

    combined = pd.concat(frames, ignore_index=True)
    grouped = (combined
               .groupby(['source', 'n', 'scaling'], as_index=False)
               .agg(type1_rate=('type1_rate', 'max'),
                    type2_rate=('type2_rate', 'max'),
                    risk=('risk', 'max'),
                    replicates=('replicates', 'min')))
    logger.info(f"Summarized {len(combined)} rows from {len(frames)} reports")
    return grouped.sort_values(['source', 'n', 'scaling']).reset_index(drop=True)
