import math
from itertools import permutations

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def brute_perm(a):
    """Permanent straight from the definition, in plain Python."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    return math.fsum(math.prod(a[i, p[i]] for i in range(n)) for p in permutations(range(n)))


def rel_err(x, ref):
    return abs(x - ref) / abs(ref)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
