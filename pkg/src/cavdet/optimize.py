"""Scalar maximization helpers for smooth, effectively unimodal objectives."""
from __future__ import annotations

import math

import numpy as np

from .errors import NoMaximumInBounds

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo: float, hi: float, rel_tol: float = 1e-6, max_iter: int = 200):
    """Golden-section maximization of f on [lo, hi]; returns (x, f(x))."""
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise NoMaximumInBounds(f"invalid bracket [{lo}, {hi}]")
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= rel_tol * (abs(a) + abs(b)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = c if fc > fd else d
    fx = max(fc, fd)
    if not math.isfinite(fx):
        raise NoMaximumInBounds(f"objective is not finite near x={x:.6g}")
    return x, fx


def max_on_log_grid(f, lo: float, hi: float, per_decade: int = 61, polish: bool = True):
    """Grid-then-polish maximization of f over a log-spaced range.

    Scans a grid of per_decade points per decade, then golden-sections in
    log space within one grid step of the best point.  Robust against the
    mild multimodality that fold points introduce.  Returns (x, f(x)).
    """
    if lo <= 0 or hi <= lo:
        raise NoMaximumInBounds(f"invalid log range [{lo}, {hi}]")
    decades = math.log10(hi / lo)
    n = max(2, int(round(per_decade * decades)) + 1)
    grid = np.logspace(math.log10(lo), math.log10(hi), n)
    vals = np.array([f(x) for x in grid])
    i = int(np.argmax(vals))
    if not polish:
        return float(grid[i]), float(vals[i])
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, n - 1)]
    if b <= a:
        return float(grid[i]), float(vals[i])
    x_log, fx = golden_max(lambda u: f(math.exp(u)), math.log(a), math.log(b), rel_tol=1e-10)
    x = math.exp(x_log)
    if fx >= vals[i]:
        return x, fx
    return float(grid[i]), float(vals[i])
