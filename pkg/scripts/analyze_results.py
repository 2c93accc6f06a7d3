"""
Plot experiment reports written by `structest experiment`.

    python scripts/analyze_results.py [--results results] [--out results/analysis_summary.png]

Left: worst-case risk against the scaling product for every threshold report.
Middle: exact TV against n for tv-collapse reports.
Right: KS distance against d/n (log-log) for clt-sweep reports.
"""

import argparse
import glob
import json
import logging
import os
import sys

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import pandas as pd

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from shared.config import config
from structest_core.harness import summarize_reports

logging.basicConfig(
    level=getattr(logging, config.log_level, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def _reports_by_mode(results_dir: str) -> dict:
    """CSV paths grouped by the mode recorded in their JSON sidecars"""
    by_mode = {}
    for csv_path in sorted(glob.glob(os.path.join(results_dir, '*.csv'))):
        sidecar = csv_path[:-4] + '.json'
        if not os.path.exists(sidecar):
            continue
        with open(sidecar, encoding='utf-8') as f:
            mode = json.load(f).get('mode')
        by_mode.setdefault(mode, []).append(csv_path)
    return by_mode


def analyze_results(results_dir: str, output_path: str) -> None:
    by_mode = _reports_by_mode(results_dir)
    if not by_mode:
        print(f"No reports found in {results_dir}/")
        return
    print(f"Found {sum(len(v) for v in by_mode.values())} reports: "
          + ", ".join(f"{k}={len(v)}" for k, v in sorted(by_mode.items())))

    plt.figure(figsize=(16, 5))

    plt.subplot(1, 3, 1)
    threshold_files = by_mode.get('ising-threshold', []) + by_mode.get('ergm-threshold', [])
    if threshold_files:
        summary = summarize_reports(threshold_files)
        print("\n--- Threshold Summary ---")
        print(summary.to_string(index=False))
        for (source, n), group in summary.groupby(['source', 'n']):
            plt.plot(group['scaling'], group['risk'], '-o', label=f'{source}, n={n}')
        plt.axhline(0.5, color='grey', linestyle=':')
    plt.title('Worst-case risk vs. scaling product')
    plt.xlabel('beta sqrt(nd)  /  beta2 sqrt(n)')
    plt.ylabel('max(type-1, type-2)')
    plt.legend(fontsize=7)
    plt.grid(True)

    plt.subplot(1, 3, 2)
    for path in by_mode.get('tv-collapse', []):
        rows = pd.read_csv(path)
        for scaling, group in rows.groupby('scaling'):
            group = group.sort_values('n')
            plt.plot(group['n'], group['tv'], '-o', label=f'{os.path.basename(path)[:-4]}, L={scaling:g}')
    plt.title('Exact TV to the matched null')
    plt.xlabel('n')
    plt.ylabel('TV')
    plt.legend(fontsize=7)
    plt.grid(True)

    plt.subplot(1, 3, 3)
    for path in by_mode.get('clt-sweep', []):
        rows = pd.read_csv(path).sort_values('d_over_n')
        plt.loglog(rows['d_over_n'], rows['ks'], 'o', label=os.path.basename(path)[:-4])
        plt.loglog(rows['d_over_n'], rows['ks_bound'], 'k--', linewidth=0.8)
    plt.title('KS distance vs. d/n')
    plt.xlabel('d/n')
    plt.ylabel('KS')
    plt.legend(fontsize=7)
    plt.grid(True, which='both')

    plt.tight_layout()
    plt.savefig(output_path)
    print(f"\nAnalysis plot saved to {output_path}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description='Plot structest experiment reports')
    parser.add_argument('--results', default=config.results_dir,
                        help=f'Directory holding report CSV/JSON pairs (default: {config.results_dir})')
    parser.add_argument('--out', default=None,
                        help='Output image (default: <results>/analysis_summary.png)')
    args = parser.parse_args()
    analyze_results(args.results, args.out or os.path.join(args.results, 'analysis_summary.png'))
