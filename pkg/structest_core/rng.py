"""
Reproducible random streams.

Every replicate draws from its own Philox stream keyed by
(seed, *key), so results do not depend on scheduling or worker count.
"""

from typing import Optional

import numpy as np

from shared.config import config


def stream(seed: Optional[int] = None, *key: int) -> np.random.Generator:
    """
    Independent generator for one replicate.

    Args:
        seed: 64-bit root seed (defaults to config.seed)
        *key: Non-negative integers identifying the stream, e.g.
            (grid_point, hypothesis, replicate)

    Returns:
        numpy Generator backed by the counter-based Philox bit generator
    """
    if seed is None:
        seed = config.seed
    if seed < 0 or any(k < 0 for k in key):
        raise ValueError(f"Seeds and stream keys must be non-negative, got {seed}, {key}")
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(sequence))


def as_generator(rng=None) -> np.random.Generator:
    """Accept a Generator, an int seed or None and return a Generator"""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        return stream()
    return stream(int(rng))
