import logging
import sys

from shared.config import config
from structest_core.cli import main

logging.basicConfig(
    level=getattr(logging, config.log_level, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

sys.exit(main())
