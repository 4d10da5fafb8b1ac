import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from acceptance_log import RESULTS  # noqa: E402


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    from resetword import _kernels

    if request.param == "numba" and not _kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    monkeypatch.setenv("RESETWORD_NUMBA", "1" if request.param == "numba" else "0")
    return request.param


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
