"""Shared pytest hooks.

Collects the acceptance verdict lines recorded by tests/test_acceptance.py
and echoes them in the terminal summary, so they are visible even though
pytest captures stdout of passing tests.
"""

ACCEPTANCE_VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)
