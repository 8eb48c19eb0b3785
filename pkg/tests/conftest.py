import numpy as np
import pytest

from helpers import ACCEPTANCE_RESULTS
from tree_hardy import build_homogeneous


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture
def binary3():
    return build_homogeneous(2, 3)
