from __future__ import annotations

import pytest

from sse_fd.model import FIG1_FIELD, fig1_system, resonant_drive


@pytest.fixture(scope="session")
def broken():
    return fig1_system()


@pytest.fixture(scope="session")
def natural():
    return fig1_system(natural_atom=True)


@pytest.fixture(scope="session")
def fig1_drive(broken):
    return resonant_drive(broken, FIG1_FIELD)


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1].removeprefix("test_")
    if report.when == "call" or report.failed or report.skipped:
        if report.passed:
            _acceptance.setdefault(name, "PASS")
        else:
            _acceptance[name] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    key = lambda n: int(n.split("_")[1])
    for name in sorted(_acceptance, key=key):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")
