"""Bracketed scalar root finding used throughout the solver.

Everything here is plain bisection on a sign change: robust at the scales
this problem works at, and deterministic bit-for-bit.
"""

import math

from .errors import RootNotBracketed

REL_TOL = 1e-12


def bisect(fn, a, b, rel_tol=REL_TOL, max_iter=200):
    """Root of ``fn`` on [a, b] by bisection to relative width ``rel_tol``.

    Requires a sign change (or an exact zero at an endpoint). Raises
    RootNotBracketed otherwise.
    """
    fa = fn(a)
    if fa == 0.0:
        return a
    fb = fn(b)
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise RootNotBracketed(f"no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}")
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        if abs(b - a) <= rel_tol * max(1.0, abs(a), abs(b)):
            return mid
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (fa > 0.0):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return 0.5 * (a + b)


def scan_sign_changes(fn, grid):
    """All (a, b, fa, fb) cells of ``grid`` where fn changes sign.

    Exact zeros at grid nodes are returned as degenerate cells (a == b).
    """
    cells = []
    prev_x = grid[0]
    prev_f = fn(prev_x)
    if prev_f == 0.0:
        cells.append((prev_x, prev_x, 0.0, 0.0))
    for x in grid[1:]:
        f = fn(x)
        if f == 0.0:
            cells.append((x, x, 0.0, 0.0))
        elif prev_f != 0.0 and (f > 0.0) != (prev_f > 0.0):
            cells.append((prev_x, x, prev_f, f))
        prev_x, prev_f = x, f
    return cells


def geometric_grid(lo, hi, n):
    """n log-spaced points on [lo, hi] (lo > 0)."""
    if lo <= 0.0:
        raise ValueError("geometric grid needs lo > 0")
    ratio = (hi / lo) ** (1.0 / (n - 1))
    return [lo * ratio**k for k in range(n)]


def offset_geometric_grid(base, lo_off, hi_off, n):
    """Points base + d with d log-spaced on [lo_off, hi_off]."""
    return [base + d for d in geometric_grid(lo_off, hi_off, n)]


def refine_minimum(fn, a, b, iters=60):
    """Golden-section minimum of fn on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(iters):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = fn(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = fn(x2)
    xm = 0.5 * (a + b)
    return xm, fn(xm)
