import inspect

import pytest

from src.helpers.errors import ConfigurationError
from src.numtheory.primes import PrimeSieve
from src.numtheory.verification import SUITES, SuiteResult, growth_suite, run_suite


def test_suite_names():
    assert set(SUITES) == {"dusart", "remarks", "growth", "interval-cover", "witness-range",
                           "practical-oracle", "practical-ratio", "conj41", "conj44"}


def test_unknown_suite(sieve):
    with pytest.raises(ConfigurationError):
        run_suite("riemann", sieve)


def test_dusart(sieve):
    result = run_suite("dusart", sieve, limit=10 ** 4)
    assert result.passed
    assert result.details['p_k_max'] == 104729


def test_remarks(sieve):
    result = run_suite("remarks", sieve, limit=2000, composite_limit=500)
    assert result.passed
    assert result.checked > 4 * 2000


def test_growth(sieve):
    result = run_suite("growth", sieve, limit=8)
    assert result.passed
    assert result.details['s_values'][5] == 37


def test_interval_cover(sieve):
    assert run_suite("interval-cover", sieve, limit=4, a_lo=-10).passed


def test_witness_range(sieve):
    assert run_suite("witness-range", sieve, limit=3, below=5, above=5).passed


def test_practical_oracle(sieve):
    result = run_suite("practical-oracle", sieve, limit=300, count_limit=1000, practical_bound=10 ** 5)
    assert result.passed
    assert result.details['T(1)']['t'] == 0


def test_conj41(sieve):
    result = run_suite("conj41", sieve, limit=4, k_limit=10 ** 4)
    assert result.passed
    assert result.checked == 16
    assert result.details['least_k'][3]['km_minus_pk_square'] == 1
    assert result.details['least_k'][3]['pk_minus_km_square'] == 12


def test_conj44(sieve):
    result = run_suite("conj44", sieve, limit=60)
    assert result.passed
    assert result.checked == 60


def test_violations_are_capped():
    result = SuiteResult("demo")
    for i in range(50):
        result.violate(n=i)
    assert result.violation_count == 50
    assert len(result.violations) == 20
    assert not result.passed
    assert result.to_dict()['violation_count'] == 50


def test_growth_default_reaches_m17():
    assert inspect.signature(growth_suite).parameters['limit'].default == 17


@pytest.mark.slow
def test_growth_through_m17():
    sieve = PrimeSieve(bound=2 ** 27, segment_length=2 ** 18, threads=2)
    result = run_suite("growth", sieve)
    assert result.passed
    assert result.details['s_values'][16] == 640483
    assert result.details['s_values'][17] == 1622840
    assert result.checked == 16 + 15 + 15


def test_practical_ratio(sieve):
    result = run_suite("practical-ratio", sieve, n_limit=10 ** 5, practical_bound=10 ** 6)
    assert result.passed
    assert result.details['T'] == {1: 0, 2: 2, 3: 7, 4: 22}
    assert result.checked == 21 + 23 + 28 + 43
