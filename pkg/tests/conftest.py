import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from paradv import build_counting_instance, counting_adversary, enumerate_relation  # noqa: E402


@pytest.fixture(scope="session")
def flagship():
    """N=4, K=1, eps=1: four singletons below six pairs."""
    return build_counting_instance(2, 1, 1)


@pytest.fixture(scope="session")
def flagship_gamma(flagship):
    return counting_adversary(flagship)


@pytest.fixture(scope="session")
def flagship_relation(flagship):
    return enumerate_relation(flagship)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
