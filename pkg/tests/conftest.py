from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from focused_macros.domains.cube import RubiksCube
from focused_macros.domains.npuzzle import NPuzzle
from focused_macros.domains.strips import parse_ground_strips

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

# Six atoms, four actions; small enough to enumerate all 64 states.
TOY_STRIPS = """\
atoms:
  p
  q
  r
  s
  t
  u
action a:
  pre: p
  add: q
  del: p
action a-back:
  pre: q
  add: p
  del: q
action b:
  pre: q r
  add: s t
  del: r
action c:
  pre: s
  add: u r
  del: s t
init:
  p r
goal:
  u
"""


@pytest.fixture(scope="session")
def cube():
    return RubiksCube()


@pytest.fixture(scope="session")
def puzzle():
    return NPuzzle(4)


@pytest.fixture(scope="session")
def puzzle3():
    return NPuzzle(3)


@pytest.fixture(scope="session")
def toy_strips():
    return parse_ground_strips(TOY_STRIPS, name="toy")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion; echoed in the terminal summary."""

    def report(name: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
