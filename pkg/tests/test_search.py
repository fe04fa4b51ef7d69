import pytest

from src.helpers.errors import BoundExceededError, InvalidArgumentError
from src.numtheory.search import (
    PredicateKind, conj41_witnesses, least_divisor_witness, least_f, least_n_ratio, least_phi,
    least_s, least_tau, scaled_witness_root, search_by_name,
)


@pytest.mark.parametrize("m, a, witness", [(1, -1, 2), (2, -1, 9), (3, 2, 4), (12, -1, 480865)])
def test_least_n_ratio(sieve, m, a, witness):
    outcome = least_n_ratio(m, a, sieve)
    assert outcome.witness_n == witness
    assert outcome.left_value == outcome.right_value == sieve.pi(witness)


@pytest.mark.parametrize("m", range(1, 9))
def test_ratio_solvable_through_m_squared_minus_m(sieve, m):
    for a in range(-3, m * m - m):
        outcome = least_n_ratio(m, a, sieve)
        assert outcome.found, (m, a)
        n = outcome.witness_n
        assert m * sieve.pi(n) == n + a


def test_ratio_above_s_has_no_witness(sieve):
    outcome = least_n_ratio(1, 0, sieve)
    assert not outcome.found
    assert outcome.scanned_up_to >= 20


def test_ratio_limit_beyond_bound(sieve):
    with pytest.raises(BoundExceededError):
        least_n_ratio(2, -1, sieve, n_limit=sieve.bound + 1)


def test_least_s(sieve):
    assert least_s(5, sieve).witness_n == 9
    assert least_s(8, sieve).witness_n == 998


def test_least_s_small_m_is_bounded(sieve):
    outcome = least_s(4, sieve)
    assert not outcome.found
    assert outcome.scanned_up_to == 10 ** 5


def test_scaled_witness_root(sieve):
    root = scaled_witness_root(least_s(5, sieve))
    assert root == 45
    assert sieve.pi(root) == (root + 25) // 5


def test_least_f(sieve):
    assert least_f(4, sieve).witness_n == 5
    assert least_f(8, sieve).witness_n == 25
    with pytest.raises(InvalidArgumentError):
        least_f(3, sieve)


@pytest.mark.parametrize("m, variant, witness", [
    (3, "phi_n", 13), (11, "phi_sum", 15887), (4, "phi_of_sum", 91),
])
def test_least_phi(sieve, m, variant, witness):
    assert least_phi(m, variant, sieve).witness_n == witness


def test_least_tau(sieve):
    outcome = least_tau(2, "tau_n", sieve)
    assert outcome.witness_n == 1
    with pytest.raises(InvalidArgumentError):
        least_tau(4, "tau_sum", sieve)
    with pytest.raises(InvalidArgumentError):
        least_tau(5, "sigma", sieve)


def test_scaled_limit_beyond_bound(sieve):
    with pytest.raises(BoundExceededError):
        least_s(2 ** 20, sieve, n_limit=2 ** 10)


def test_divisor_witness(sieve):
    assert least_divisor_witness(1, sieve).witness_n == 1
    outcome = least_divisor_witness(2, sieve)
    assert outcome.witness_n == 5
    assert outcome.extra == {'dividend': 14, 'divisor': 7}
    assert outcome.left_value == outcome.right_value == 0
    bounded = least_divisor_witness(3, sieve)
    assert bounded.witness_n == 5
    assert not bounded.counterexample_candidate


def test_pi_divides_variant(sieve):
    outcome = least_divisor_witness(1, sieve, variant="pi_divides_pm_pn")
    assert outcome.witness_n == 2


def test_conj41(sieve):
    kinds = [o.spec.kind for o in conj41_witnesses(5, sieve, k_limit=10 ** 4)]
    assert kinds == [PredicateKind.KM_MINUS_PK_SQUARE, PredicateKind.PK_MINUS_KM_SQUARE,
                     PredicateKind.KM_MINUS_PK_PRIME, PredicateKind.PK_MINUS_KM_PRIME]
    assert conj41_witnesses(5, sieve, k_limit=10 ** 4)[0].witness_n == 29
    three = conj41_witnesses(3, sieve, k_limit=10 ** 4)
    assert three[0].witness_n == 1
    assert three[1].witness_n == 12
    assert conj41_witnesses(1, sieve, k_limit=10 ** 4)[3].witness_n == 3


def test_search_by_name(sieve):
    assert search_by_name("f", 4, sieve)[0].witness_n == 5
    assert len(search_by_name("conj41", 3, sieve, n_limit=1000)) == 4
    with pytest.raises(InvalidArgumentError):
        search_by_name("ratio", 2, sieve)
    with pytest.raises(InvalidArgumentError):
        search_by_name("unknown", 2, sieve)


def test_outcome_record(sieve):
    record = least_n_ratio(2, -1, sieve).to_record()
    assert record['predicate'] == "ratio"
    assert record['params'] == {'m': 2, 'a': -1}
    assert record['witness'] == 9
