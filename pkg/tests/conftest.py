import os

import pytest
from hypothesis import HealthCheck, settings

from elliptikit.lattice import LatticeContext

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HYPOTHESIS_MAX_EXAMPLES", "40")),
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def ctx_square():
    return LatticeContext(1j)


@pytest.fixture(scope="session")
def ctx_skew():
    return LatticeContext(0.5 + 1.5j)


@pytest.fixture(scope="session", params=[1j, 0.5 + 1.5j], ids=["tau=i", "tau=(1+3i)/2"])
def ctx(request):
    return LatticeContext(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
