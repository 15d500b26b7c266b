"""Shared fixtures, plus the acceptance-criteria summary hook.

Acceptance tests report through the `criterion` fixture so the run ends
with one PASS/FAIL line per criterion, whatever order pytest ran them in.
"""

import time
from contextlib import contextmanager

import pytest

_LINES: dict = {}


@pytest.fixture
def criterion():
    @contextmanager
    def run(number: int, title: str):
        started = time.perf_counter()
        try:
            yield
        except BaseException:
            _LINES[number] = f"criterion {number:>2}  FAIL  {title}"
            raise
        elapsed = time.perf_counter() - started
        _LINES[number] = f"criterion {number:>2}  PASS  {title}  ({elapsed:.2f}s)"

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_LINES):
        terminalreporter.write_line(_LINES[number])
