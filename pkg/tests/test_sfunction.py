import pytest

from src.helpers.errors import InvalidArgumentError
from src.numtheory.sfunction import (
    compute_S, interval_cover_check, rosser_upper, s_cutoff, theory_horizon, verify_growth,
    witness_range_check,
)
from src.report.tables import load_tables


@pytest.mark.parametrize("m, cutoff", [(1, 7), (2, 20), (3, 54), (5, 403), (10, 59874)])
def test_s_cutoff(m, cutoff):
    assert s_cutoff(m) == cutoff


def test_rosser_upper_dominates_primes(sieve):
    for j in range(1, 2000):
        assert rosser_upper(j) >= sieve.nth_prime(j)


@pytest.mark.parametrize("m, value, argmax", [
    (1, -1, [1, 2]),
    (2, 1, [2, 3, 4]),
    (3, 5, [4, 6, 8]),
])
def test_small_values(sieve, m, value, argmax):
    result = compute_S(m, sieve)
    assert result.s_value == value
    assert result.argmax_ks == argmax


def test_s5(sieve):
    assert compute_S(5, sieve).s_value == 37


@pytest.mark.parametrize("m", [
    *range(1, 11),
    *(pytest.param(m, marks=pytest.mark.slow) for m in (11, 12, 13)),
])
def test_early_termination_agrees_with_full_scan(sieve, m):
    fast = compute_S(m, sieve)
    full = compute_S(m, sieve, early_termination=False)
    assert (fast.s_value, fast.argmax_ks) == (full.s_value, full.argmax_ks)
    assert not full.early_terminated
    assert full.cutoff_used == s_cutoff(m)


def test_s_matches_published_values(sieve):
    published = {row.m: row.expected for row in load_tables()["T3.1"].rows if row.m <= 13}
    assert published[10] == 2743
    assert published[13] == 40543
    assert {m: compute_S(m, sieve).s_value for m in published} == published


def test_early_termination_cuts_the_scan(sieve):
    result = compute_S(10, sieve)
    assert result.early_terminated
    assert result.cutoff_used < s_cutoff(10)
    record = result.to_record()
    assert record['m'] == 10
    assert record['s'] == result.s_value


def test_compute_S_rejects_m_zero(sieve):
    with pytest.raises(InvalidArgumentError):
        compute_S(0, sieve)


def test_theory_horizon_caps_at_bound():
    assert theory_horizon(1, 10 ** 6) == rosser_upper(8)
    assert theory_horizon(40, 10 ** 6) == 10 ** 6


def test_growth_inequalities(sieve):
    report = verify_growth(8, sieve)
    assert [row.m for row in report.rows] == list(range(1, 9))
    assert report.passed
    assert report.rows[2].s_bounds is True
    assert report.rows[-1].ratio_growth is None


def test_interval_cover(sieve):
    assert interval_cover_check(3, -10, sieve)
    assert interval_cover_check(4, -25, sieve)


def test_witness_range(sieve):
    report = witness_range_check(3, sieve, below=10, above=10)
    assert report.s_value == 5
    assert report.passed
