import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pi3nn.errors import DataError, TieError
from pi3nn.rootfind import (
    TOP_MARGIN,
    ExceedanceProblem,
    bisect_exceedance,
    count_above,
    solve_exceedance,
    solve_median_shift,
)


def brute_force_interval(ratios, k):
    """Scan candidate points between and around sorted values; return those with count k."""
    vals = np.unique(ratios)
    cands = np.concatenate([[0.0], vals, (vals[:-1] + vals[1:]) / 2, [vals[-1] * 2 + 1]])
    return sorted(c for c in cands if sum(r > c for r in ratios) == k)


def test_median_shift_symmetric():
    nu = solve_median_shift([-2, -1, 0, 1, 2])
    assert 0 <= nu < 1
    assert nu == 0.5
    assert count_above([-2, -1, 0, 1, 2], nu) == 2


def test_median_shift_single():
    nu = solve_median_shift([5.0])
    assert nu >= 5
    assert count_above([5.0], nu) == 0


@pytest.mark.parametrize("seed", range(10))
def test_median_shift_counts_exactly(seed):
    r = np.random.default_rng(seed).standard_t(3, size=1000 + seed)
    nu = solve_median_shift(r)
    assert int(np.sum(r > nu)) == r.size // 2


def test_median_shift_errors():
    with pytest.raises(DataError):
        solve_median_shift([])
    with pytest.raises(TieError):
        solve_median_shift([1.0, 1.0, 0.0, 2.0])


def test_exceedance_examples():
    r = [1.0, 2.0, 3.0, 4.0]
    one = solve_exceedance(ExceedanceProblem(r, 1))
    assert one.value == 3.5 and one.achieved_count == 1 and one.bracket == (3.0, 4.0)
    assert 3.5 in brute_force_interval(r, 1)

    zero = solve_exceedance(ExceedanceProblem(r, 0))
    assert zero.value == 4.0 * (1 + TOP_MARGIN) and zero.achieved_count == 0

    four = solve_exceedance(ExceedanceProblem(r, 4))
    assert four.value == 0.5 and four.achieved_count == 4


def test_exceedance_tie_error():
    with pytest.raises(TieError) as exc:
        solve_exceedance(ExceedanceProblem([1.0, 2.0, 2.0, 3.0], 2))
    assert exc.value.value == 2.0
    # ties away from the boundary are harmless
    assert solve_exceedance(ExceedanceProblem([1.0, 1.0, 2.0, 3.0], 1)).achieved_count == 1


def test_problem_validation():
    with pytest.raises(DataError):
        ExceedanceProblem([], 0)
    with pytest.raises(DataError):
        ExceedanceProblem([1.0, -1.0], 1)
    with pytest.raises(DataError):
        ExceedanceProblem([1.0], 2)


def test_adjacent_doubles():
    lo = 1.0
    hi = np.nextafter(lo, 2.0)
    sol = solve_exceedance(ExceedanceProblem([lo, hi], 1))
    assert sol.achieved_count == 1


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
def test_bisection_matches_examples(k):
    p = ExceedanceProblem([1.0, 2.0, 3.0, 4.0], k)
    assert bisect_exceedance(p).achieved_count == solve_exceedance(p).achieved_count == k


def test_bisection_all_counted_from_zero():
    p = ExceedanceProblem([0.3, 0.7, 1.1], 3)
    sol = bisect_exceedance(p, bracket=(0.0, 2.0))
    assert sol.achieved_count == 3 and 0 < sol.value < 0.3


def test_bisection_tie_error():
    with pytest.raises(TieError):
        bisect_exceedance(ExceedanceProblem([1.0, 2.0, 2.0, 3.0], 2))


def test_bisection_random_problems():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        n = int(rng.integers(1, 200))
        r = rng.exponential(size=n) + 1e-3
        k = int(rng.integers(0, n + 1))
        sol = bisect_exceedance(ExceedanceProblem(r, k))
        assert sol.achieved_count == k


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(1e-6, 1e6), min_size=1, max_size=60, unique=True),
    st.data(),
)
def test_solvers_agree_and_brute_force(ratios, data):
    k = data.draw(st.integers(0, len(ratios)))
    p = ExceedanceProblem(ratios, k)
    a = solve_exceedance(p)
    b = bisect_exceedance(p)
    assert a.achieved_count == b.achieved_count == k
    assert brute_force_interval(ratios, k)
    desc = sorted(ratios, reverse=True)
    lo = desc[k] if k < len(desc) else 0.0
    hi = desc[k - 1] if k > 0 else np.inf
    assert lo <= a.value < hi and lo <= b.value < hi


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(1e-3, 1e3), min_size=2, max_size=50, unique=True))
def test_strictly_decreasing_in_k(ratios):
    vals = [solve_exceedance(ExceedanceProblem(ratios, k)).value for k in range(len(ratios) + 1)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
