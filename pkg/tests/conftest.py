import os

import pytest


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False,
                     help="also run the long H_6 job")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow") or os.environ.get("YBH_RUN_SLOW"):
        return
    skip = pytest.mark.skip(reason="long-running; use --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    path = tmp_path / "cache"
    monkeypatch.setenv("YBH_CACHE_DIR", str(path))
    return path
