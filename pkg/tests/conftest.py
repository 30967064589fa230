import numpy as np
import pytest

from pdresponse import DimerSpec, SSHSpec, dimer_greens, ssh_greens, time_grid

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    """Collects one 'criterion: PASS/FAIL' line per acceptance criterion."""
    def log(label, ok, detail=""):
        line = f"{label}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def dimer_exact():
    return dimer_greens(DimerSpec(), time_grid(0.1, 10.0))


@pytest.fixture(scope="session")
def ssh_exact():
    return ssh_greens(SSHSpec(), time_grid(0.2, 10.0))

