"""Scalar maximization helpers."""
import math

import pytest

from cavdet import NoMaximumInBounds
from cavdet.optimize import golden_max, max_on_log_grid


def test_golden_max_quadratic():
    x, fx = golden_max(lambda x: -(x - 1.7) ** 2 + 4.0, 0.0, 5.0, rel_tol=1e-9)
    assert x == pytest.approx(1.7, rel=1e-6)
    assert fx == pytest.approx(4.0, abs=1e-12)


def test_golden_max_log_scale_function():
    x, fx = golden_max(lambda x: -(math.log(x) - 2.0) ** 2, 0.1, 1e4)
    assert x == pytest.approx(math.e**2, rel=1e-4)


def test_golden_max_rejects_bad_bracket():
    with pytest.raises(NoMaximumInBounds):
        golden_max(lambda x: x, 2.0, 1.0)
    with pytest.raises(NoMaximumInBounds):
        golden_max(lambda x: float("nan"), 0.0, 1.0)


def test_max_on_log_grid_polishes():
    f = lambda x: -(math.log10(x) - 1.3) ** 2
    x, fx = max_on_log_grid(f, 1.0, 1e3, per_decade=11)
    assert x == pytest.approx(10**1.3, rel=1e-3)
    assert fx <= 0.0
    # monotone edge case lands at the boundary
    x_edge, _ = max_on_log_grid(lambda x: x, 1.0, 100.0, per_decade=11)
    assert x_edge == pytest.approx(100.0, rel=1e-6)
