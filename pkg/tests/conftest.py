from __future__ import annotations

import json
from pathlib import Path

import pytest

from cohsys.curve import build_curve, curve_from_json
from cohsys.sheaf import locally_free
from cohsys.stability import SystemType

DATA = Path(__file__).parent / "data"

# Filled by tests/test_acceptance.py, printed at the end of the session.
ACCEPTANCE_LINES: list[str] = []


def load(name: str) -> dict:
    return json.loads((DATA / name).read_text())


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def t1():
    return curve_from_json(load("t1.json"))


@pytest.fixture
def p3():
    return curve_from_json(load("p3.json"))


@pytest.fixture
def t1_system(t1):
    return SystemType(locally_free(t1, 2, [5, 5]), 3)


@pytest.fixture
def star_curve():
    return build_curve([(1, 2), (2, 2), (3, 3), (4, 2)], [[2, 1], [2, 3], [2, 4]], [1, 1, 1, 1])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
