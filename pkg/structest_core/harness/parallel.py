"""
Chunked fan-out of replicate work over a process pool.

Tasks are built by the caller with their own stream keys, so the results
do not depend on how many workers run them; pool.map keeps their order.
"""

import logging
from multiprocessing import Pool, cpu_count
from typing import Callable, List, Sequence

logger = logging.getLogger(__name__)


def chunk_ranges(total: int, chunk_size: int) -> List[range]:
    """Split range(total) into consecutive blocks of chunk_size"""
    return [range(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]


def run_tasks(func: Callable, tasks: Sequence, workers: int = 1) -> List:
    """
    Apply func to every task, in parallel when workers > 1.

    Args:
        func: Module-level function (picklable)
        tasks: Task arguments, one per call
        workers: Process count; 1 runs inline

    Returns:
        Results in task order
    """
    tasks = list(tasks)
    workers = min(workers, len(tasks), cpu_count())
    if workers <= 1:
        return [func(task) for task in tasks]

    logger.debug(f"Running {len(tasks)} tasks on {workers} workers")
    try:
        with Pool(workers) as pool:
            return pool.map(func, tasks)
    except OSError as e:
        # Pool creation can fail in sandboxes without shared semaphores
        logger.warning(f"Process pool unavailable ({e}); running serially")
        return [func(task) for task in tasks]
