import math

import numpy as np
import pytest

from uptri.triangle import TriangleParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_params(rng, n, r_max=5.0):
    r1 = rng.uniform(1.0, r_max, n)
    r2 = 1.0 + (r1 - 1.0) * rng.uniform(0.0, 1.0, n)
    alpha = rng.uniform(1e-6, 2 * math.pi - 1e-6, n)
    return [TriangleParams(float(a), float(b), float(c)) for a, b, c in zip(r1, r2, alpha)]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
