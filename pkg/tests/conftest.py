import pytest


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", default=False, help="run full-scale checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "long: opt-in full-scale runs (enable with --long)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="needs --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)
