"""Shared test plumbing: the acceptance-criterion recorder.

The acceptance tests register one human-readable pass/fail line per
criterion; the terminal-summary hook prints the collected lines after
the test run, so the verdicts are visible even though pytest captures
per-test stdout.
"""

import pytest

CRITERION_LINES = {}


@pytest.fixture(scope="session")
def criterion():
    """Record one pass/fail line for an acceptance criterion; returns
    the boolean so tests can ``assert criterion(n, ok, detail)``."""

    def record(number: int, passed: bool, detail: str) -> bool:
        status = "PASS" if passed else "FAIL"
        CRITERION_LINES[number] = f"criterion {number:2d}: {status} - {detail}"
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERION_LINES):
        terminalreporter.write_line(CRITERION_LINES[number])
