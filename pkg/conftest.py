"""Shared pytest fixtures and the opt-in marker for desk-scale runs."""

import numpy as np
import pytest

from structest_core.graphs import build_circulant
from structest_core.rng import stream


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='run desk-scale experiments marked slow')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: desk-scale experiment, runs only with --runslow')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def c4():
    return build_circulant(4, 2)


@pytest.fixture
def rng() -> np.random.Generator:
    return stream(12345)
