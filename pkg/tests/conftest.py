"""Shared fixtures plus the summary hook for the acceptance suite."""

from __future__ import annotations

import pytest

from catlidar.states import state_for_nbar

PRESETS = ("cs", "ecss", "sfcs")

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number:02d}: {verdict}  {detail}")


@pytest.fixture
def acceptance():
    """Record one criterion outcome and assert it."""

    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_RESULTS[number] = (bool(ok), detail)
        assert ok, f"criterion {number:02d}: {detail}"

    return record


@pytest.fixture(scope="session")
def specs3():
    return {name: state_for_nbar(name, 3.0) for name in PRESETS}


@pytest.fixture(scope="session")
def specs100():
    return {name: state_for_nbar(name, 100.0) for name in PRESETS}
