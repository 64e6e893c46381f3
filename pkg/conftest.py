import logging
import os
import sys

import pytest

# the modules live at the repository root, next to the CLI scripts
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from quad import QuadConfig  # noqa: E402


@pytest.fixture
def cfg():
    return QuadConfig()


@pytest.fixture(autouse=True)
def _no_rtol_env(monkeypatch):
    monkeypatch.delenv('KRATZEL_RTOL', raising=False)


@pytest.fixture(autouse=True)
def _quiet_logging(caplog):
    caplog.set_level(logging.WARNING)
