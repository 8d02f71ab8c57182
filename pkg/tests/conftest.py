"""Shared pytest plumbing for the suite.

The acceptance tests register a one-line verdict per criterion; this hook
prints them together at the end of the run so the overall contract can be
read off in one block.
"""

_criterion_lines = []


def record_criterion(line: str):
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
