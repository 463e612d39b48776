import math

import pytest

from morse_thermo.spectrum import PotentialSpec

_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; returns the boolean so the test can assert it."""

    def record(label: str, ok: bool, detail: str) -> bool:
        _CRITERIA.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        print(_CRITERIA[-1])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


@pytest.fixture
def desk():
    return PotentialSpec(V1=8.0, V2=8.0, alpha=1.0)


@pytest.fixture
def morse50():
    return PotentialSpec(V1=50.0, V2=50.0, alpha=1.0)


DESK_LEVELS = (-6.125, -3.125, -1.125, -0.125)
DESK_TAU = math.sqrt(2.0)
DESK_XI = 14.0
