# conftest.py
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.model import validate_params  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the minute-long checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: takes about a minute; needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def half1():
    """m = 1, lambda = 1/2, J = 1."""
    return validate_params(1, [0.5], [1.0])


@pytest.fixture
def two_channel():
    return validate_params(2, [0.3, 0.2], [1.0, 0.5])


@pytest.fixture
def three_channel():
    return validate_params(3, [0.1, 0.15, 0.2], [0.5, 0.3, 0.2])
