import os

# Must precede any numba import: lets the frontier engine run several
# workers even on a single-core host, and avoids the TBB version warning.
os.environ.setdefault("NUMBA_NUM_THREADS", "4")
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

import pytest  # noqa: E402

from gp_pursuit.graph import make_graph  # noqa: E402

FAMILY = [(28, 8), (35, 10), (35, 15), (42, 6), (42, 12), (42, 18)]


@pytest.fixture(scope="session")
def g28():
    return make_graph(28, 8)


@pytest.fixture(scope="session")
def table28(g28):
    from gp_pursuit.solver import solve

    return solve(g28, 3, True, 1)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
