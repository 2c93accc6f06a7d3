#!/usr/bin/env python
"""
structest entry point

    python structest.py sample --model ising --n 200 --d 4 --beta 0.05 --count 10 --out spins.txt
    python structest.py experiment --config docs/experiments/ising_threshold.json
"""

import logging
import sys

from shared.config import config
from structest_core.cli import main

logging.basicConfig(
    level=getattr(logging, config.log_level, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

if __name__ == "__main__":
    sys.exit(main())
