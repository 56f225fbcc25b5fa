from __future__ import annotations

import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qsteiner.ffield import build_field  # noqa: E402
from qsteiner.orbits import GroupSpec, build_orbit_table  # noqa: E402

# acceptance lines collected during the run, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def f13():
    return build_field(2, 13, "13,12,10,9,0")


@pytest.fixture(scope="session")
def f7():
    return build_field(2, 7)


@pytest.fixture(scope="session")
def f3():
    return build_field(3, 4)


@pytest.fixture(scope="session")
def flagship_tables(f13):
    """2- and 3-subspace orbit tables over GF(2^13) under the normalizer,
    with the wall time of each build."""
    group = GroupSpec("normalizer", f13)
    t0 = time.perf_counter()
    t_tab = build_orbit_table(2, group)
    t1 = time.perf_counter()
    k_tab = build_orbit_table(3, group)
    t2 = time.perf_counter()
    return t_tab, k_tab, {"t": t1 - t0, "k": t2 - t1}
