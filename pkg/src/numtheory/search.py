"""Least-witness searches over π-predicates.

Every search walks n upward in blocks. A block carries the columns its
predicate needs (π(n), π(mn), p_n, φ, σ₀) as numpy arrays, so the
predicate is one vectorized comparison and the first true index is the
witness. Witnesses are re-validated with scalar recomputation before they
are returned.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from .arith import (divisor_count, divisor_count_window, euler_phi, fibonacci, is_square,
                    is_square_array, totient_window)
from .primes import PrimeCursor, PrimeSieve, PiCheckpoint
from ..helpers.errors import (BoundExceededError, InvalidArgumentError, PrimeRatioError,
                              check_int64)

logger = logging.getLogger("search")

CONJ41_K_LIMIT = 10 ** 7
# π(4n) < n + 4 for every n, so m <= 4 only gets a bounded confirmation
SMALL_M_S_LIMIT = 10 ** 5
# prime tests on predicate values use the cached flag table up to here
FLAG_TABLE_LIMIT = 2 ** 24
FIRST_BLOCK = 256


class PredicateKind(Enum):
    RATIO = "ratio"
    MN_EQ_M_PLUS_N = "mn_eq_m_plus_n"
    MN_EQ_FIB = "mn_eq_fib"
    PHI_N = "phi_n"
    PHI_SUM = "phi_sum"
    PHI_OF_SUM = "phi_of_sum"
    TAU_N = "tau_n"
    TAU_SUM = "tau_sum"
    TAU_OF_SUM = "tau_of_sum"
    DIVIDES_PM_PN = "divides_pm_pn"
    PI_DIVIDES_PM_PN = "pi_divides_pm_pn"
    KM_MINUS_PK_SQUARE = "km_minus_pk_square"
    PK_MINUS_KM_SQUARE = "pk_minus_km_square"
    KM_MINUS_PK_PRIME = "km_minus_pk_prime"
    PK_MINUS_KM_PRIME = "pk_minus_km_prime"

    @property
    def needs_pi_mn(self) -> bool:
        return self in SCALED_KINDS or self is PredicateKind.PI_DIVIDES_PM_PN

    @property
    def needs_p_n(self) -> bool:
        return self in (PredicateKind.DIVIDES_PM_PN, PredicateKind.PI_DIVIDES_PM_PN) or self in CONJ41_KINDS


SCALED_KINDS = frozenset({
    PredicateKind.MN_EQ_M_PLUS_N, PredicateKind.MN_EQ_FIB,
    PredicateKind.PHI_N, PredicateKind.PHI_SUM, PredicateKind.PHI_OF_SUM,
    PredicateKind.TAU_N, PredicateKind.TAU_SUM, PredicateKind.TAU_OF_SUM,
})
CONJ41_KINDS = (
    PredicateKind.KM_MINUS_PK_SQUARE, PredicateKind.PK_MINUS_KM_SQUARE,
    PredicateKind.KM_MINUS_PK_PRIME, PredicateKind.PK_MINUS_KM_PRIME,
)
PHI_VARIANTS = {k.value: k for k in (PredicateKind.PHI_N, PredicateKind.PHI_SUM, PredicateKind.PHI_OF_SUM)}
TAU_VARIANTS = {k.value: k for k in (PredicateKind.TAU_N, PredicateKind.TAU_SUM, PredicateKind.TAU_OF_SUM)}
DIVISOR_VARIANTS = {k.value: k for k in (PredicateKind.DIVIDES_PM_PN, PredicateKind.PI_DIVIDES_PM_PN)}


@dataclass(frozen=True)
class PredicateSpec:
    kind: PredicateKind
    m: int
    a: Optional[int] = None
    n_start: int = 1
    n_limit: Optional[int] = None

    @property
    def params(self) -> Dict[str, int]:
        params = {'m': self.m}
        if self.a is not None:
            params['a'] = self.a
        return params


@dataclass
class SearchOutcome:
    spec: PredicateSpec
    witness_n: Optional[int]
    left_value: Optional[int]
    right_value: Optional[int]
    scanned_up_to: int
    counterexample_candidate: bool = False
    elapsed_ms: float = 0.0
    extra: Dict[str, int] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.witness_n is not None

    def to_record(self) -> Dict[str, object]:
        return {
            "predicate": self.spec.kind.value,
            "params": self.spec.params,
            "witness": self.witness_n,
            "lhs": self.left_value,
            "rhs": self.right_value,
            "scanned_up_to": self.scanned_up_to,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


class ScaledPiStream:
    """π(m·n) for consecutive blocks of n, read off one forward prime cursor."""

    def __init__(self, sieve: PrimeSieve, scale: int, n_start: int):
        self.scale = scale
        self.cursor = PrimeCursor(sieve, sieve.checkpoint_at(scale * (n_start - 1)))

    def block(self, ns: np.ndarray) -> np.ndarray:
        base = self.cursor.count
        primes = self.cursor.take_through(int(ns[-1]) * self.scale)
        return base + np.searchsorted(primes, ns * self.scale, side="right").astype(np.int64)


class PrimeIndexStream:
    """p_n for consecutive n, buffering primes from a cursor."""

    def __init__(self, sieve: PrimeSieve, n_start: int):
        self.sieve = sieve
        if n_start > 1:
            start = PiCheckpoint(sieve.nth_prime(n_start) - 1, n_start - 1)
        else:
            start = PiCheckpoint(1, 0)
        self.cursor = PrimeCursor(sieve, start)
        self.buffer = np.zeros(0, dtype=np.int64)

    def take(self, count: int) -> np.ndarray:
        """The next ``count`` primes, fewer once the sieve bound is reached."""
        while len(self.buffer) < count and self.cursor.position < self.sieve.bound:
            # about count·log(x) integers hold count primes near x
            step = max(1024, count * (int(math.log(self.cursor.position + 16)) + 2))
            upto = min(self.cursor.position + step, self.sieve.bound)
            self.buffer = np.concatenate((self.buffer, self.cursor.take_through(upto)))
        head, self.buffer = self.buffer[:count], self.buffer[count:]
        return head


class WitnessSearch:
    """Scan one predicate from n_start up to n_limit and stop at the first hit."""

    def __init__(self, sieve: PrimeSieve, spec: PredicateSpec, exhaust_is_error: bool = True):
        self.sieve = sieve
        self.spec = spec
        self.exhaust_is_error = exhaust_is_error
        self.kind = spec.kind
        self.m = spec.m
        self._constants()

    def _constants(self):
        m = self.m
        if self.kind is PredicateKind.MN_EQ_FIB:
            self.rhs_const = fibonacci(m)
        elif self.kind is PredicateKind.MN_EQ_M_PLUS_N:
            self.rhs_const = m
        elif self.kind is PredicateKind.PHI_SUM:
            self.rhs_const = euler_phi(m)
        elif self.kind is PredicateKind.TAU_SUM:
            self.rhs_const = divisor_count(m)
        else:
            self.rhs_const = 0
        if self.kind in DIVISOR_VARIANTS.values():
            self.p_m = self.sieve.nth_prime(m)

    def run(self) -> SearchOutcome:
        spec = self.spec
        started = time.monotonic()
        lo, limit = spec.n_start, spec.n_limit
        # small first blocks keep small witnesses cheap
        block_length = min(FIRST_BLOCK, self.sieve.segment_length)

        pi_stream = None
        if self.kind is PredicateKind.RATIO:
            pi_stream = ScaledPiStream(self.sieve, 1, lo)
        elif self.kind.needs_pi_mn:
            pi_stream = ScaledPiStream(self.sieve, self.m, lo)
        prime_stream = PrimeIndexStream(self.sieve, lo) if self.kind.needs_p_n else None

        scanned = lo - 1
        while lo <= limit:
            hi = min(lo + block_length, limit + 1)
            ns = np.arange(lo, hi, dtype=np.int64)
            columns = {'n': ns}
            if prime_stream is not None:
                p_n = prime_stream.take(len(ns))
                if len(p_n) < len(ns):
                    if self.exhaust_is_error:
                        raise BoundExceededError(hi - 1, self.sieve.bound,
                                                 f"{self.kind.value}(m={self.m}) needs p_n for n =")
                    ns = ns[:len(p_n)]
                    columns['n'] = ns
                    limit = lo + len(p_n) - 1
                    if len(ns) == 0:
                        break
                columns['p_n'] = p_n
            if pi_stream is not None:
                columns['pi'] = pi_stream.block(ns)

            hit = self._first_hit(columns)
            if hit is not None:
                outcome = self._outcome(columns, hit, started)
                verify_outcome(outcome, self.sieve)
                logger.info(f"{self.kind.value}{spec.params}: witness n={outcome.witness_n}")
                return outcome
            scanned = int(ns[-1])
            lo = scanned + 1
            block_length = min(2 * block_length, self.sieve.segment_length)

        elapsed = (time.monotonic() - started) * 1000
        logger.info(f"{self.kind.value}{spec.params}: no witness up to n={scanned}")
        return SearchOutcome(spec, None, None, None, scanned, elapsed_ms=elapsed)

    # -- predicates --------------------------------------------------------

    def _first_hit(self, c: Dict[str, np.ndarray]) -> Optional[int]:
        kind, m, ns = self.kind, self.m, c['n']
        if kind is PredicateKind.RATIO:
            mask = (m * c['pi'] == ns + self.spec.a) & (ns > 1)
        elif kind in (PredicateKind.MN_EQ_M_PLUS_N, PredicateKind.MN_EQ_FIB,
                      PredicateKind.PHI_SUM, PredicateKind.TAU_SUM):
            mask = c['pi'] == self.rhs_const + self._window_rhs(ns)
        elif kind in (PredicateKind.PHI_N, PredicateKind.PHI_OF_SUM,
                      PredicateKind.TAU_N, PredicateKind.TAU_OF_SUM):
            mask = c['pi'] == self._window_rhs(ns)
        elif kind is PredicateKind.DIVIDES_PM_PN:
            mask = (self.p_m + c['p_n']) % (m + ns) == 0
        elif kind is PredicateKind.PI_DIVIDES_PM_PN:
            divisor = np.maximum(c['pi'], 1)
            mask = (c['pi'] > 0) & ((self.p_m + c['p_n']) % divisor == 0)
        else:
            return self._first_conj41_hit(c)
        hits = np.flatnonzero(mask)
        return int(hits[0]) if hits.size else None

    def _window_rhs(self, ns: np.ndarray) -> np.ndarray:
        lo, hi = int(ns[0]), int(ns[-1]) + 1
        kind = self.kind
        if kind in (PredicateKind.MN_EQ_M_PLUS_N, PredicateKind.MN_EQ_FIB):
            return ns
        if kind in (PredicateKind.PHI_N, PredicateKind.PHI_SUM):
            return totient_window(lo, hi)
        if kind is PredicateKind.PHI_OF_SUM:
            return totient_window(lo + self.m, hi + self.m)
        if kind in (PredicateKind.TAU_N, PredicateKind.TAU_SUM):
            return divisor_count_window(lo, hi)
        return divisor_count_window(lo + self.m, hi + self.m)

    def _conj41_values(self, c: Dict[str, np.ndarray]) -> np.ndarray:
        values = c['n'] * self.m - c['p_n']
        if self.kind in (PredicateKind.PK_MINUS_KM_SQUARE, PredicateKind.PK_MINUS_KM_PRIME):
            values = -values
        return values

    def _first_conj41_hit(self, c: Dict[str, np.ndarray]) -> Optional[int]:
        values = self._conj41_values(c)
        if self.kind in (PredicateKind.KM_MINUS_PK_SQUARE, PredicateKind.PK_MINUS_KM_SQUARE):
            hits = np.flatnonzero(is_square_array(values))
            return int(hits[0]) if hits.size else None

        candidates = np.flatnonzero(values >= 2)
        if not candidates.size:
            return None
        top = int(values[candidates].max())
        if top <= min(FLAG_TABLE_LIMIT, self.sieve.bound):
            flags = self.sieve.prime_flags(top)
            hits = candidates[flags[values[candidates]]]
            return int(hits[0]) if hits.size else None
        for i in candidates.tolist():
            if self.sieve.is_prime(int(values[i])):
                return i
        return None

    def _outcome(self, c: Dict[str, np.ndarray], i: int, started: float) -> SearchOutcome:
        kind, m = self.kind, self.m
        n = int(c['n'][i])
        extra: Dict[str, int] = {}
        if kind is PredicateKind.RATIO:
            left, right = int(c['pi'][i]), (n + self.spec.a) // m
        elif kind in SCALED_KINDS:
            left = int(c['pi'][i])
            right = left
        elif kind in (PredicateKind.DIVIDES_PM_PN, PredicateKind.PI_DIVIDES_PM_PN):
            dividend = self.p_m + int(c['p_n'][i])
            divisor = m + n if kind is PredicateKind.DIVIDES_PM_PN else int(c['pi'][i])
            left, right = dividend % divisor, 0
            extra = {'dividend': dividend, 'divisor': divisor}
        else:
            value = int(self._conj41_values(c)[i])
            left = right = value
            extra = {'p_k': int(c['p_n'][i])}
        elapsed = (time.monotonic() - started) * 1000
        return SearchOutcome(self.spec, n, left, right, n, elapsed_ms=elapsed, extra=extra)


def verify_outcome(outcome: SearchOutcome, sieve: PrimeSieve) -> bool:
    """Recompute both sides of a witness from scratch; raise if they disagree."""
    if outcome.witness_n is None:
        return True
    spec, n, m = outcome.spec, outcome.witness_n, outcome.spec.m
    kind = spec.kind
    if kind is PredicateKind.RATIO:
        ok = n > 1 and (n + spec.a) % m == 0 and sieve.pi(n) == (n + spec.a) // m
    elif kind in SCALED_KINDS:
        lhs = sieve.pi(m * n)
        rhs = {
            PredicateKind.MN_EQ_M_PLUS_N: lambda: m + n,
            PredicateKind.MN_EQ_FIB: lambda: fibonacci(m) + n,
            PredicateKind.PHI_N: lambda: euler_phi(n),
            PredicateKind.PHI_SUM: lambda: euler_phi(m) + euler_phi(n),
            PredicateKind.PHI_OF_SUM: lambda: euler_phi(m + n),
            PredicateKind.TAU_N: lambda: divisor_count(n),
            PredicateKind.TAU_SUM: lambda: divisor_count(m) + divisor_count(n),
            PredicateKind.TAU_OF_SUM: lambda: divisor_count(m + n),
        }[kind]()
        ok = lhs == rhs == outcome.left_value
    elif kind in (PredicateKind.DIVIDES_PM_PN, PredicateKind.PI_DIVIDES_PM_PN):
        dividend = sieve.nth_prime(m) + sieve.nth_prime(n)
        divisor = m + n if kind is PredicateKind.DIVIDES_PM_PN else sieve.pi(m * n)
        ok = divisor > 0 and dividend % divisor == 0
    else:
        value = n * m - sieve.nth_prime(n)
        if kind in (PredicateKind.PK_MINUS_KM_SQUARE, PredicateKind.PK_MINUS_KM_PRIME):
            value = -value
        if kind in (PredicateKind.KM_MINUS_PK_SQUARE, PredicateKind.PK_MINUS_KM_SQUARE):
            ok = is_square(value)
        else:
            ok = sieve.is_prime(value)
        ok = ok and value == outcome.left_value
    if not ok:
        raise PrimeRatioError(f"witness n={n} for {kind.value} {spec.params} failed re-validation")
    return True


# -- limits ----------------------------------------------------------------

def _check_m(m: int, least: int, what: str):
    if m < least:
        raise InvalidArgumentError(f"{what} needs m >= {least}, got {m}")


def _scaled_limit(m: int, n_limit: Optional[int], sieve: PrimeSieve) -> int:
    if n_limit is None:
        return sieve.bound // m
    check_int64(m * n_limit, f"m·n_limit for m={m}")
    if m * n_limit > sieve.bound:
        raise BoundExceededError(m * n_limit, sieve.bound, f"π(m·n) for m={m} at n_limit={n_limit}:")
    return n_limit


def _plain_limit(n_limit: int, sieve: PrimeSieve) -> int:
    check_int64(n_limit, "n_limit")
    if n_limit > sieve.bound:
        raise BoundExceededError(n_limit, sieve.bound, "n_limit")
    return n_limit


def _search(sieve: PrimeSieve, spec: PredicateSpec, exhaust_is_error: bool = True) -> SearchOutcome:
    return WitnessSearch(sieve, spec, exhaust_is_error).run()


# -- public searches -------------------------------------------------------

def least_n_ratio(m: int, a: int, sieve: PrimeSieve, n_limit: Optional[int] = None) -> SearchOutcome:
    """Least n > 1 with π(n) = (n + a)/m.

    Without ``n_limit`` the scan covers the theory horizon for a >= 0 and the
    whole sieve for a < 0. A witness is guaranteed for a < 0, so running out
    of sieve then is an error; so is a horizon that had to be cut at the bound.
    """
    from .sfunction import rosser_upper, s_cutoff, theory_horizon

    _check_m(m, 1, "least_n_ratio")
    if n_limit is not None:
        spec = PredicateSpec(PredicateKind.RATIO, m, a, 2, _plain_limit(n_limit, sieve))
        return _search(sieve, spec)

    if a >= 0:
        limit = theory_horizon(m, sieve.bound)
        k_cut = s_cutoff(m)
        complete = k_cut < sieve.bound and rosser_upper(k_cut + 1) <= sieve.bound
    else:
        limit, complete = sieve.bound, False
    outcome = _search(sieve, PredicateSpec(PredicateKind.RATIO, m, a, 2, limit))
    if not outcome.found and not complete:
        raise BoundExceededError(limit, sieve.bound, f"least_n_ratio(m={m}, a={a}) horizon")
    return outcome


def least_s(m: int, sieve: PrimeSieve, n_limit: Optional[int] = None) -> SearchOutcome:
    """Least n >= 1 with π(mn) = m + n; for m <= 4 there is none."""
    _check_m(m, 1, "least_s")
    if n_limit is None and m <= 4:
        n_limit = min(SMALL_M_S_LIMIT, sieve.bound // m)
    spec = PredicateSpec(PredicateKind.MN_EQ_M_PLUS_N, m, None, 1, _scaled_limit(m, n_limit, sieve))
    return _search(sieve, spec)


def least_f(m: int, sieve: PrimeSieve, n_limit: Optional[int] = None) -> SearchOutcome:
    """Least n >= 1 with π(mn) = F_m + n."""
    _check_m(m, 4, "least_f")
    spec = PredicateSpec(PredicateKind.MN_EQ_FIB, m, None, 1, _scaled_limit(m, n_limit, sieve))
    return _search(sieve, spec)


def least_phi(m: int, variant: str, sieve: PrimeSieve, n_limit: Optional[int] = None) -> SearchOutcome:
    if variant not in PHI_VARIANTS:
        raise InvalidArgumentError(f"unknown totient variant {variant!r}; expected one of {sorted(PHI_VARIANTS)}")
    _check_m(m, 1, "least_phi")
    spec = PredicateSpec(PHI_VARIANTS[variant], m, None, 1, _scaled_limit(m, n_limit, sieve))
    return _search(sieve, spec)


def least_tau(m: int, variant: str, sieve: PrimeSieve, n_limit: Optional[int] = None) -> SearchOutcome:
    """π(mn) against the divisor count σ₀(n), σ₀(m) + σ₀(n) or σ₀(m + n)."""
    if variant not in TAU_VARIANTS:
        raise InvalidArgumentError(f"unknown divisor-count variant {variant!r}; expected one of {sorted(TAU_VARIANTS)}")
    _check_m(m, 2 if variant == "tau_n" else 5, f"least_tau[{variant}]")
    spec = PredicateSpec(TAU_VARIANTS[variant], m, None, 1, _scaled_limit(m, n_limit, sieve))
    return _search(sieve, spec)


def least_divisor_witness(m: int, sieve: PrimeSieve, variant: str = "divides_pm_pn",
                          n_limit: Optional[int] = None) -> SearchOutcome:
    """Least n with (m + n) | (p_m + p_n), or with π(mn) | (p_m + p_n).

    For (m + n) | (p_m + p_n) and m > 2 the default scan stops at m(m−1) − 1;
    missing a witness there marks the outcome as a counterexample candidate.
    """
    if variant not in DIVISOR_VARIANTS:
        raise InvalidArgumentError(f"unknown divisibility variant {variant!r}; expected one of {sorted(DIVISOR_VARIANTS)}")
    _check_m(m, 1, "least_divisor_witness")
    kind = DIVISOR_VARIANTS[variant]
    bounded_by_conjecture = kind is PredicateKind.DIVIDES_PM_PN and m > 2 and n_limit is None

    if kind is PredicateKind.PI_DIVIDES_PM_PN:
        limit = _scaled_limit(m, n_limit, sieve)
    elif bounded_by_conjecture:
        limit = m * (m - 1) - 1
    elif n_limit is not None:
        limit = _plain_limit(n_limit, sieve)
    else:
        limit = sieve.bound

    outcome = _search(sieve, PredicateSpec(kind, m, None, 1, limit), exhaust_is_error=n_limit is not None)
    if bounded_by_conjecture and not outcome.found:
        outcome.counterexample_candidate = True
        logger.warning(f"m={m}: no n < m(m-1) with (m+n) | (p_m+p_n); needs an extended search")
    return outcome


def conj41_witnesses(m: int, sieve: PrimeSieve, k_limit: int = CONJ41_K_LIMIT) -> List[SearchOutcome]:
    """Least k for: km − p_k square, p_k − km square, km − p_k prime, p_k − km prime.

    A missing witness is reported as bounded absence.
    """
    _check_m(m, 1, "conj41_witnesses")
    check_int64(m * k_limit, "m·k_limit")
    return [_search(sieve, PredicateSpec(kind, m, None, 1, k_limit), exhaust_is_error=False)
            for kind in CONJ41_KINDS]


def search_by_name(name: str, m: int, sieve: PrimeSieve, a: Optional[int] = None,
                   variant: Optional[str] = None, n_limit: Optional[int] = None) -> List[SearchOutcome]:
    """Dispatch for the command line: ratio, s, f, phi, tau, divisor, conj41."""
    if name == "ratio":
        if a is None:
            raise InvalidArgumentError("search ratio needs --a")
        return [least_n_ratio(m, a, sieve, n_limit)]
    if name == "s":
        return [least_s(m, sieve, n_limit)]
    if name == "f":
        return [least_f(m, sieve, n_limit)]
    if name == "phi":
        return [least_phi(m, variant or "phi_n", sieve, n_limit)]
    if name == "tau":
        return [least_tau(m, variant or "tau_n", sieve, n_limit)]
    if name == "divisor":
        return [least_divisor_witness(m, sieve, variant or "divides_pm_pn", n_limit)]
    if name == "conj41":
        return conj41_witnesses(m, sieve, n_limit or CONJ41_K_LIMIT)
    raise InvalidArgumentError(f"unknown search {name!r}")


def scaled_witness_root(outcome: SearchOutcome) -> int:
    """N = m·s(m) for a least_s witness; π(N) = (N + m²)/m."""
    if outcome.spec.kind is not PredicateKind.MN_EQ_M_PLUS_N or outcome.witness_n is None:
        raise InvalidArgumentError("scaled_witness_root needs a found least_s outcome")
    return outcome.spec.m * outcome.witness_n
