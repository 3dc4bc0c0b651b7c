"""Shared fixtures: acceptance criterion lines are echoed live and repeated
in the terminal summary."""

import pytest

_LINES = []


@pytest.fixture
def criterion_line(capsys):
    """Return ``record(label, passed, detail)``, which prints one line."""

    def record(label, passed, detail):
        line = f"CRITERION {label}: {'PASS' if passed else 'FAIL'} ({detail})"
        _LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
