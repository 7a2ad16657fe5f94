import itertools
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from garland import build_complex  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def sphere(n):
    """Boundary of the (n+1)-simplex: an n-sphere on n+2 vertices."""
    return build_complex(itertools.combinations(range(n + 2), n + 1))


def complete_skeleton(v, n):
    return build_complex(itertools.combinations(range(v), n + 1))


def octahedron():
    return build_complex([(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)])


@pytest.fixture
def triangle():
    return build_complex([(0, 1, 2)])


@pytest.fixture
def tetrahedron():
    return build_complex([(0, 1, 2, 3)])


@pytest.fixture
def k7():
    return complete_skeleton(7, 2)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_RESULTS: dict = {}


def record(number: int, title: str, passed: bool, detail: str = "") -> bool:
    ACCEPTANCE_RESULTS[number] = (title, bool(passed), detail)
    print(f"[acceptance {number}] {'PASS' if passed else 'FAIL'}  {title}  {detail}")
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        title, ok, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"{n:>2}. {'PASS' if ok else 'FAIL'}  {title}  ({detail})")
