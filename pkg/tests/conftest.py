from functools import lru_cache

import pytest

from multbound.families import parse_entry


@lru_cache(maxsize=None)
def table_of(expr: str):
    return parse_entry(expr).table()


@pytest.fixture
def group():
    return table_of


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
