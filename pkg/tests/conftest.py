"""Shared test plumbing: the acceptance-criterion reporter.

The acceptance tests register one line per criterion; the summary block
is printed at the end of the pytest run so the verdicts are visible in
plain ``pytest -v`` output without -s.
"""

from __future__ import annotations

criterion_lines: list[tuple[int, str, str]] = []


def record_criterion(number: int, label: str, status: str) -> None:
    criterion_lines.append((number, label, status))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, status in sorted(criterion_lines):
        terminalreporter.write_line(f"criterion {number:2d} {status:4s} {label}")
