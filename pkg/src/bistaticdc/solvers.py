"""One-dimensional root finding and golden-section minimization.

Small, dependency-free building blocks for the design solvers: every closed
form in `analytic` is cross-checked against one of these, so they deliberately
share no algebra with the formulas they verify.
"""

from __future__ import annotations

import math
from typing import Callable

from .errors import NoCrossingError

__all__ = ["bisect", "bisect_log", "golden_section_min", "golden_section_min_log"]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.

    tol is absolute on the bracket width. Raises NoCrossingError when the
    bracket does not straddle a sign change.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise NoCrossingError(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid == lo or mid == hi:
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_log(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Bisection on log(x) for positive brackets; rel_tol bounds the relative error."""
    if not (lo > 0.0 and hi > lo):
        raise ValueError(f"need 0 < lo < hi, got [{lo}, {hi}]")
    try:
        root_log = bisect(
            lambda t: f(math.exp(t)), math.log(lo), math.log(hi), tol=rel_tol, max_iter=max_iter
        )
    except NoCrossingError as exc:
        raise NoCrossingError(f"no sign change on [{lo:g}, {hi:g}]") from exc
    return math.exp(root_log)


def golden_section_min(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> float:
    """Minimizer of a unimodal f on [lo, hi] by golden-section search.

    tol is absolute on the final bracket width; returns the bracket midpoint.
    """
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
    return 0.5 * (lo + hi)


def golden_section_min_log(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = 1e-9,
    grid_points: int = 129,
    max_iter: int = 200,
) -> float:
    """Minimizer on a positive interval: coarse log grid, then golden section.

    The grid locates the minimum's neighbourhood (the objective need only be
    unimodal there); golden section then refines in log space until the
    bracket's relative width is below rel_tol.
    """
    if not (lo > 0.0 and hi > lo):
        raise ValueError(f"need 0 < lo < hi, got [{lo}, {hi}]")
    log_lo = math.log(lo)
    log_hi = math.log(hi)
    step = (log_hi - log_lo) / (grid_points - 1)
    best_i = 0
    best_v = math.inf
    for i in range(grid_points):
        v = f(math.exp(log_lo + i * step))
        if v < best_v:
            best_i, best_v = i, v
    bracket_lo = log_lo + max(best_i - 1, 0) * step
    bracket_hi = log_lo + min(best_i + 1, grid_points - 1) * step
    t = golden_section_min(
        lambda u: f(math.exp(u)), bracket_lo, bracket_hi, tol=rel_tol, max_iter=max_iter
    )
    return math.exp(t)
