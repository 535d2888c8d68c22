"""Exact solvers for integer-valued exceedance equations.

The objective ``count(v) = #{r_i > v}`` is a nonincreasing step function of
a scalar, so the set of ``v`` hitting a given count is a half-open interval
between two adjacent order statistics. ``solve_exceedance`` reads that
interval off a sort and returns its midpoint. ``bisect_exceedance`` searches
the same equation by bisection and exists to cross-check the sort-based
answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, TieError

TOP_MARGIN = 2.0**-30


@dataclass(frozen=True)
class ExceedanceProblem:
    ratios: np.ndarray
    target_count: int

    def __post_init__(self):
        r = np.asarray(self.ratios, dtype=float).reshape(-1)
        object.__setattr__(self, "ratios", r)
        if r.size == 0:
            raise DataError("ratios must be nonempty")
        if not np.all(np.isfinite(r)):
            raise DataError("ratios must be finite")
        if np.any(r <= 0):
            raise DataError("ratios must be strictly positive")
        if not 0 <= self.target_count <= r.size:
            raise DataError(f"target_count {self.target_count} outside [0, {r.size}]")


@dataclass(frozen=True)
class RootSolution:
    value: float
    achieved_count: int
    bracket: tuple[float, float]


def count_above(values, v: float) -> int:
    return int(np.count_nonzero(np.asarray(values) > v))


def _gap_point(desc: np.ndarray, k: int) -> tuple[float, float, float]:
    """A point with exactly ``k`` entries of ``desc`` strictly above it.

    ``desc`` is sorted in decreasing order and ``0 <= k < len(desc)``.
    Returns (point, lo, hi) where [lo, hi) is the full solution interval.
    """
    if k == 0:
        top = float(desc[0])
        return top + TOP_MARGIN * max(abs(top), 1.0), top, math.inf
    hi, lo = float(desc[k - 1]), float(desc[k])
    if not hi > lo:
        raise TieError(
            f"value {hi!r} is repeated across the required count boundary ({k} above)", value=hi
        )
    mid = 0.5 * (lo + hi)
    if not mid < hi:
        # lo and hi are adjacent doubles; lo itself still has k entries above
        mid = lo
    return mid, lo, hi


def solve_median_shift(residuals) -> float:
    """Shift with exactly floor(N/2) residuals strictly above it."""
    r = np.asarray(residuals, dtype=float).reshape(-1)
    if r.size == 0:
        raise DataError("residuals must be nonempty")
    if not np.all(np.isfinite(r)):
        raise DataError("residuals must be finite")
    desc = np.sort(r)[::-1]
    return _gap_point(desc, r.size // 2)[0]


def solve_exceedance(p: ExceedanceProblem) -> RootSolution:
    desc = np.sort(p.ratios)[::-1]
    k, n = p.target_count, desc.size
    if k == n:
        lo, hi = 0.0, float(desc[-1])
        value = 0.5 * hi
    elif k == 0:
        lo, hi = float(desc[0]), math.inf
        value = lo * (1.0 + TOP_MARGIN)
    else:
        value, lo, hi = _gap_point(desc, k)
    return RootSolution(value, count_above(p.ratios, value), (lo, hi))


def bisect_exceedance(p: ExceedanceProblem, max_iter: int = 200, bracket=None) -> RootSolution:
    """Bisection on ``count(v) - target_count`` over ``[lo, hi]``.

    Stops as soon as the count matches. Under ties the count jumps over the
    target and the bracket collapses, which raises ``TieError``.
    """
    r = p.ratios
    k = p.target_count
    if bracket is None:
        top = float(r.max())
        bracket = (0.0, 2.0 * top + 1.0)
    lo, hi = float(bracket[0]), float(bracket[1])
    if count_above(r, lo) < k or count_above(r, hi) > k:
        raise DataError(f"bracket ({lo}, {hi}) does not enclose a count of {k}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        c = count_above(r, mid)
        if c == k:
            return RootSolution(mid, c, (lo, hi))
        if mid <= lo or mid >= hi:
            break
        if c > k:
            lo = mid
        else:
            hi = mid
    raise TieError(f"no value gives exactly {k} ratios above it (ties near {lo!r})", value=lo)
