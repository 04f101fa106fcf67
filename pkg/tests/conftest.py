"""Shared fixtures: the release-gate verdict registry.

Acceptance tests record one line per numbered criterion through the gate
fixture; the lines are printed as their own section after the test summary
so a release run can be audited at a glance.
"""

import pytest

_verdicts: dict[int, str] = {}


@pytest.fixture(scope="session")
def gate():
    def record(criterion: int, passed: bool, detail: str) -> None:
        word = "PASS" if passed else "FAIL"
        _verdicts[criterion] = f"[criterion {criterion:02d}] {word} - {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("release gate")
    for criterion in sorted(_verdicts):
        terminalreporter.write_line(_verdicts[criterion])
