import numpy as np
import pytest

from src.helpers.errors import ArithmeticOverflowError, InvalidArgumentError, INT64_MAX
from src.numtheory.arith import (
    divisor_count, divisor_count_window, divisor_sum, euler_phi, factorize, fibonacci,
    is_square, is_square_array, totient_window,
)


def test_factorize():
    assert factorize(360).factors == ((2, 3), (3, 2), (5, 1))
    assert factorize(1).factors == ()
    assert factorize(97).factors == ((97, 1),)
    big = 65537 * 65539
    assert factorize(big).factors == ((65537, 1), (65539, 1))
    assert factorize(big).product() == big


def test_factorize_rejects_non_positive():
    with pytest.raises(InvalidArgumentError):
        factorize(0)


@pytest.mark.parametrize("n, phi, tau, sigma", [
    (1, 1, 1, 1), (12, 4, 6, 28), (13, 12, 2, 14), (36, 12, 9, 91), (100, 40, 9, 217),
])
def test_multiplicative_functions(n, phi, tau, sigma):
    assert euler_phi(n) == phi
    assert divisor_count(n) == tau
    assert divisor_sum(n) == sigma


def test_windows_match_scalar_functions():
    lo, hi = 1, 3000
    assert totient_window(lo, hi).tolist() == [euler_phi(n) for n in range(lo, hi)]
    assert divisor_count_window(lo, hi).tolist() == [divisor_count(n) for n in range(lo, hi)]
    lo, hi = 999000, 1000000
    assert totient_window(lo, hi).tolist() == [euler_phi(n) for n in range(lo, hi)]
    assert divisor_count_window(lo, hi).tolist() == [divisor_count(n) for n in range(lo, hi)]


def test_fibonacci():
    assert [fibonacci(k) for k in range(9)] == [0, 1, 1, 2, 3, 5, 8, 13, 21]
    assert fibonacci(92) == 7540113804746346429
    with pytest.raises(ArithmeticOverflowError):
        fibonacci(93)


def test_is_square():
    assert is_square(0)
    assert is_square(144)
    assert not is_square(145)
    assert not is_square(-4)


def test_is_square_array():
    values = np.array([-4, 0, 1, 2, 15, 16, 17, 10 ** 18, 10 ** 18 + 1, INT64_MAX, 3037000499 ** 2])
    expected = [False, True, True, False, False, True, False, True, False, False, True]
    assert is_square_array(values).tolist() == expected


def test_scalar_functions_match_brute_force():
    for n in range(1, 10 ** 4 + 1):
        ks = np.arange(1, n + 1)
        divisors = ks[n % ks == 0]
        assert euler_phi(n) == int(np.count_nonzero(np.gcd(ks, n) == 1)), n
        assert divisor_count(n) == len(divisors), n
        assert divisor_sum(n) == int(divisors.sum()), n


def test_multiplicativity_on_coprime_pairs():
    for a in range(1, 120):
        for b in range(a, 120, 7):
            if np.gcd(a, b) != 1:
                continue
            assert euler_phi(a * b) == euler_phi(a) * euler_phi(b)
            assert divisor_count(a * b) == divisor_count(a) * divisor_count(b)
            assert divisor_sum(a * b) == divisor_sum(a) * divisor_sum(b)
