"""Bounded verification suites run by ``verify <suite>``.

Each suite returns a SuiteResult; a violation is a checked case where a
proven statement failed numerically. Conjecture searches that find nothing
are listed in ``details`` as bounded absence, never as violations.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from .practicals import PracticalScanner, is_practical, practical_flags, subset_sum_practical
from .primes import PrimeSieve
from .search import CONJ41_K_LIMIT, conj41_witnesses, least_divisor_witness
from .sfunction import interval_cover_check, verify_growth, witness_range_check
from ..helpers.errors import ConfigurationError

logger = logging.getLogger("verification")

MAX_VIOLATIONS = 20


@dataclass
class SuiteResult:
    suite: str
    checked: int = 0
    violations: List[Dict[str, object]] = field(default_factory=list)
    details: Dict[str, object] = field(default_factory=dict)
    elapsed_ms: float = 0.0
    violation_count: int = 0

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def violate(self, **record):
        self.violation_count += 1
        if len(self.violations) < MAX_VIOLATIONS:
            self.violations.append(record)

    def to_dict(self):
        return {
            'suite': self.suite,
            'checked': self.checked,
            'passed': self.passed,
            'violation_count': self.violation_count,
            'violations': self.violations,
            'details': self.details,
            'elapsed_ms': round(self.elapsed_ms, 3),
        }


def dusart_suite(sieve: PrimeSieve, limit: int = 10 ** 6) -> SuiteResult:
    """k(log k + log log k − 1) <= p_k for k >= 2 and p_k <= k(log k + log log k) for k >= 6."""
    result = SuiteResult("dusart")
    primes = sieve.first_primes(limit).astype(np.float64)
    ks = np.arange(1, limit + 1, dtype=np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        bracket = np.log(ks) + np.log(np.log(ks))
    lower_bad = np.flatnonzero((ks >= 2) & (primes < ks * (bracket - 1)))
    upper_bad = np.flatnonzero((ks >= 6) & (primes > ks * bracket))
    for i in lower_bad.tolist():
        result.violate(k=i + 1, p_k=int(primes[i]), bound="lower")
    for i in upper_bad.tolist():
        result.violate(k=i + 1, p_k=int(primes[i]), bound="upper")
    result.checked = 2 * limit - 6
    result.details = {'k_max': limit, 'p_k_max': int(primes[-1])}
    return result


def remarks_suite(sieve: PrimeSieve, limit: int = 10 ** 5, composite_limit: int = 10 ** 4) -> SuiteResult:
    """π(m + n) = n with n = π(m-th composite); the four bounds on π(n), π(2n), π(3n), π(4n)."""
    result = SuiteResult("remarks")

    # m-th composite is below 2m + 10 for every m
    table_size = max(2 * composite_limit + 10, composite_limit + 1)
    flags = sieve.prime_flags(table_size)
    pis = np.cumsum(flags, dtype=np.int64)
    xs = np.arange(len(flags), dtype=np.int64)
    composites = xs[(xs >= 4) & ~flags][:composite_limit]
    ns = pis[composites]
    ms = np.arange(1, len(composites) + 1, dtype=np.int64)
    for i in np.flatnonzero(pis[ms + ns] != ns).tolist():
        result.violate(remark="pi(m+n)=n", m=i + 1, n=int(ns[i]))
    if composites[-1] != sieve.nth_composite(composite_limit):
        result.violate(remark="composite table", m=composite_limit)
    result.checked += len(composites)

    pis = sieve.pi_table(4 * limit)
    n = np.arange(1, limit + 1, dtype=np.int64)
    checks = {
        'pi(n)<n+1': pis[n] < n + 1,
        'pi(2n)<=n': pis[2 * n] <= n,
        'pi(3n)<=n+1': pis[3 * n] <= n + 1,
        'pi(4n)<n+4': pis[4 * n] < n + 4,
    }
    for name, ok in checks.items():
        for i in np.flatnonzero(~ok).tolist():
            result.violate(remark=name, n=i + 1)
        result.checked += limit
    for k in range(1, 45):
        if not sieve.pi(4 * k) < k + 4:
            result.violate(remark="pi(4n)<n+4 individually", n=k)
        result.checked += 1
    result.details = {'composite_limit': composite_limit, 'n_max': limit}
    return result


def growth_suite(sieve: PrimeSieve, limit: int = 17) -> SuiteResult:
    result = SuiteResult("growth")
    report = verify_growth(limit, sieve)
    for row in report.rows:
        for name in ("ratio_growth", "s_bounds", "argmax_floor"):
            value = getattr(row, name)
            if value is None:
                continue
            result.checked += 1
            if not value:
                result.violate(m=row.m, check=name, s=row.s_value)
    result.details = {
        's_values': {row.m: row.s_value for row in report.rows},
        'root_monotone_sample': report.monotone_sample,
    }
    return result


def interval_cover_suite(sieve: PrimeSieve, limit: int = 6, a_lo: int = -25) -> SuiteResult:
    result = SuiteResult("interval-cover")
    for m in range(1, limit + 1):
        result.checked += 1
        if not interval_cover_check(m, a_lo, sieve):
            result.violate(m=m, a_lo=a_lo)
    return result


def witness_range_suite(sieve: PrimeSieve, limit: int = 6, below: int = 25, above: int = 25) -> SuiteResult:
    result = SuiteResult("witness-range")
    for m in range(1, limit + 1):
        report = witness_range_check(m, sieve, below, above)
        result.checked += below + report.s_value + 1 + above
        for a in report.missing:
            result.violate(m=m, a=a, problem="no witness at or below S(m)")
        for a in report.unexpected:
            result.violate(m=m, a=a, problem="witness above S(m)")
    return result


def practical_oracle_suite(sieve: PrimeSieve, limit: int = 5000, count_limit: int = 10 ** 4,
                           practical_bound: Optional[int] = None) -> SuiteResult:
    result = SuiteResult("practical-oracle")
    window = practical_flags(1, limit + 1)
    for n in range(1, limit + 1):
        oracle = subset_sum_practical(n)
        if oracle != is_practical(n) or oracle != bool(window[n - 1]):
            result.violate(n=n, oracle=oracle)
        result.checked += 1

    scanner = PracticalScanner(practical_bound)
    counted = scanner.practical_count(count_limit)
    oracle_count = sum(1 for n in range(1, count_limit + 1) if subset_sum_practical(n))
    result.checked += 1
    if counted != oracle_count:
        result.violate(check="practical_count", x=count_limit, counted=counted, oracle=oracle_count)

    t_one = scanner.compute_T(1)
    result.checked += 1
    if t_one.t_value != 0:
        result.violate(check="T(1)", computed=t_one.t_value)
    result.details = {'practical_count': counted, 'T(1)': t_one.to_record()}
    return result


def practical_ratio_suite(sieve: PrimeSieve, limit: int = 4, below: int = 10, above: int = 10,
                          n_limit: int = 10 ** 6, practical_bound: Optional[int] = None) -> SuiteResult:
    """P(n) = (n + a)/m is solvable exactly for a <= T(m)."""
    result = SuiteResult("practical-ratio")
    scanner = PracticalScanner(practical_bound)
    t_values = {}
    for m in range(1, limit + 1):
        t_value = scanner.compute_T(m).t_value
        t_values[m] = t_value
        for a in range(-below, t_value + above + 1):
            n = scanner.least_n_practical_ratio(m, a, n_limit)
            result.checked += 1
            if a <= t_value and n is None:
                result.violate(m=m, a=a, problem="no witness at or below T(m)")
            elif a > t_value and n is not None:
                result.violate(m=m, a=a, n=n, problem="witness above T(m)")
    result.details = {'T': t_values, 'n_limit': n_limit}
    return result


def conj41_suite(sieve: PrimeSieve, limit: int = 20, k_limit: int = CONJ41_K_LIMIT) -> SuiteResult:
    result = SuiteResult("conj41")
    found: Dict[int, Dict[str, Optional[int]]] = {}
    absent = []
    for m in range(1, limit + 1):
        row = {}
        for outcome in conj41_witnesses(m, sieve, k_limit):
            result.checked += 1
            row[outcome.spec.kind.value] = outcome.witness_n
            if not outcome.found:
                absent.append({'m': m, 'predicate': outcome.spec.kind.value,
                               'scanned_up_to': outcome.scanned_up_to})
        found[m] = row
    result.details = {'least_k': found, 'bounded_absence': absent}
    return result


def conj44_suite(sieve: PrimeSieve, limit: int = 2000) -> SuiteResult:
    """(m + n) | (p_m + p_n) for some n, with n < m(m−1) once m > 2."""
    result = SuiteResult("conj44")
    largest = (0, 0)
    for m in range(1, limit + 1):
        outcome = least_divisor_witness(m, sieve)
        result.checked += 1
        if not outcome.found or outcome.counterexample_candidate:
            result.violate(m=m, scanned_up_to=outcome.scanned_up_to)
        elif outcome.witness_n > largest[1]:
            largest = (m, outcome.witness_n)
    result.details = {'largest_witness': {'m': largest[0], 'n': largest[1]}}
    return result


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    'dusart': dusart_suite,
    'remarks': remarks_suite,
    'growth': growth_suite,
    'interval-cover': interval_cover_suite,
    'witness-range': witness_range_suite,
    'practical-oracle': practical_oracle_suite,
    'practical-ratio': practical_ratio_suite,
    'conj41': conj41_suite,
    'conj44': conj44_suite,
}


def run_suite(name: str, sieve: PrimeSieve, limit: Optional[int] = None, **options) -> SuiteResult:
    if name not in SUITES:
        raise ConfigurationError(f"unknown verification suite {name!r}; expected one of {', '.join(SUITES)}")
    started = time.monotonic()
    logger.info(f"Running suite {name}")
    kwargs = dict(options)
    if limit is not None:
        kwargs['limit'] = limit
    result = SUITES[name](sieve, **kwargs)
    result.elapsed_ms = (time.monotonic() - started) * 1000
    level = logging.INFO if result.passed else logging.ERROR
    logger.log(level, f"Suite {name}: {result.checked} checks, {result.violation_count} violations "
                      f"in {result.elapsed_ms / 1000:.1f}s")
    return result
