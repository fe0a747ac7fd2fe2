import itertools
from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("repro", derandomize=True, database=None)
settings.load_profile("repro")

from convexterm.rational import FIXED_GRID, certification_grid, reduced_pq_pairs

GRID = certification_grid()
RANDOM_PART = [p for p in GRID if p not in FIXED_GRID]
# fixed x fixed plus zipped random pairs, for expensive carriers
REDUCED_PQ = reduced_pq_pairs(GRID)
assert REDUCED_PQ == list(itertools.product(FIXED_GRID, FIXED_GRID)) + list(zip(RANDOM_PART, reversed(RANDOM_PART)))
HALF = Fraction(1, 2)

_ACCEPTANCE = {}


@pytest.fixture
def grid():
    return GRID


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    key, label = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = _ACCEPTANCE.get(key, ("passed", label, 0.0))
        status = "failed" if "failed" in (prev[0], rep.outcome) else rep.outcome
        _ACCEPTANCE[key] = (status, label, prev[2] + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: (int(str(k).split(".")[0]), str(k))):
        status, label, secs = _ACCEPTANCE[key]
        verdict = "PASS" if status == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {key}: {verdict}  {label}  ({secs:.2f}s)")
