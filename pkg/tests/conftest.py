import functools
import os

import pytest
from hypothesis import HealthCheck, settings

from tileflip.region import rectangle, torus
from tileflip.smallgraph import enumerate_tilings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = os.path.join(os.path.dirname(__file__), "data")

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list = []


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@functools.lru_cache(maxsize=None)
def tilings_of(kind: str, w: int, h: int, m: int, s: int):
    region = rectangle(w, h) if kind == "rect" else torus(w, h)
    return tuple(enumerate_tilings(region, m, s))


@pytest.fixture(scope="session")
def square8_23():
    return list(tilings_of("rect", 8, 8, 2, 3))


@pytest.fixture
def data_path():
    return lambda name: os.path.join(DATA, name)
