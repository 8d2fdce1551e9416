import pytest


def pytest_configure(config):
    """Register the slow marker"""
    config.addinivalue_line("markers", "slow: runs a full bundled scenario or a large randomized suite")


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False, help="Run slow tests")


def pytest_collection_modifyitems(config, items):
    """Skip slow tests unless --run-slow is specified"""
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="Need --run-slow option to run slow tests")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
