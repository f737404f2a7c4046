import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from peereval import _backend

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"

# The worked examples, rows = evaluated student, columns = evaluator.
EXAMPLE1 = [[0, F(2, 3), F(2, 3)], [F(1, 2), 0, F(1, 3)], [F(1, 2), F(1, 3), 0]]
EXAMPLE2 = [[0, 1, F(1, 2)], [1, 0, F(1, 2)], [0, 0, 0]]
EXAMPLE5 = [[0, 2, 2], [3, 0, 3], [5, 5, 0]]
EXAMPLE6 = [[0, 1, 11, 1], [2, 0, 19, 2], [3, 1, 0, 3], [4, 1, 39, 0]]
EXAMPLE6_W = [4, 0, 1, 3]
EXAMPLE6_B = [
    [1, 0.518987, 0.333333, 0.282051],
    [1.92683, 1, 0.666667, 0.497418],
    [3, 1.5, 1, 0.75],
    [3.54545, 2.01038, 1.33333, 1],
]
MANIPULATED = [[0, F(2, 3), F(1, 2)], [F(1, 2), 0, F(1, 2)], [F(1, 2), F(1, 3), 0]]
MANIPULATED_B = [[1, 1, 2], [1, 1, 1], [F(1, 2), 1, 1]]


def as_float(m):
    return [[float(x) for x in row] for row in m]


@pytest.fixture(params=sorted(_backend.KERNELS))
def backend(request, monkeypatch):
    """Run the test once per available kernel implementation."""
    monkeypatch.setattr(_backend, "ratio_sums", _backend.KERNELS[request.param])
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
