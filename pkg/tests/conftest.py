import os
import sys

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

GRAPHS = os.path.join(ROOT, "graphs")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 24-qubit lattice checks (deselect with -m 'not slow')")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def graph_path():
    def _path(name):
        return os.path.join(GRAPHS, name)
    return _path


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch, tmp_path):
    """Every test starts from the built-in defaults, never a config file in the working directory"""
    from config import ConfigManager, set_config
    for key in ("ZXLAT_CONFIG", "ZXLAT_DENSE_CAP", "ZXLAT_ENUM_CAP", "ZXLAT_WORKERS", "ZXLAT_SEED"):
        monkeypatch.delenv(key, raising=False)
    set_config(ConfigManager(str(tmp_path / "zxlattice_config.json")))
    yield
    set_config(None)
