"""Elementary arithmetic functions: factorization, φ, σ₀, σ, Fibonacci, squares.

The divisor COUNT (σ₀, ``divisor_count``) and divisor SUM (σ, ``divisor_sum``)
are kept apart on purpose; the conjectures about π(mn) use the count, the
practical-number criterion uses the sum.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import Tuple

import numpy as np

from .primes import simple_sieve
from ..helpers.errors import ArithmeticOverflowError, InvalidArgumentError, INT64_MAX

FIBONACCI_MAX_INDEX = 92
TRIAL_PRIME_LIMIT = 2 ** 16
ROOT_MAX = isqrt(INT64_MAX)


@lru_cache(maxsize=1)
def _trial_primes() -> Tuple[int, ...]:
    return tuple(simple_sieve(TRIAL_PRIME_LIMIT).tolist())


@lru_cache(maxsize=8)
def window_primes(limit: int) -> np.ndarray:
    return simple_sieve(limit)


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: Tuple[Tuple[int, int], ...]

    def product(self) -> int:
        result = 1
        for p, e in self.factors:
            result *= p ** e
        return result


def factorize(n: int) -> Factorization:
    if n < 1:
        raise InvalidArgumentError(f"factorize needs n >= 1, got {n}")
    factors = []
    rest = n
    for p in _trial_primes():
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            factors.append((p, e))
    else:
        # beyond the table: 6k±1 candidates
        d = TRIAL_PRIME_LIMIT + 1 - (TRIAL_PRIME_LIMIT + 1) % 6 + 5
        while d * d <= rest:
            for q in (d, d + 2):
                if rest % q == 0:
                    e = 0
                    while rest % q == 0:
                        rest //= q
                        e += 1
                    factors.append((q, e))
            d += 6
    if rest > 1:
        factors.append((rest, 1))
    return Factorization(n, tuple(factors))


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n).factors:
        result -= result // p
    return result


def divisor_count(n: int) -> int:
    result = 1
    for _, e in factorize(n).factors:
        result *= e + 1
    return result


def divisor_sum(n: int) -> int:
    result = 1
    for p, e in factorize(n).factors:
        result *= (p ** (e + 1) - 1) // (p - 1)
    return result


def fibonacci(k: int) -> int:
    """F_k with F_0 = 0, F_1 = 1."""
    if k < 0:
        raise InvalidArgumentError(f"Fibonacci index must be >= 0, got {k}")
    if k > FIBONACCI_MAX_INDEX:
        raise ArithmeticOverflowError(f"F_{k} does not fit in a signed 64-bit integer")
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def is_square_array(values: np.ndarray) -> np.ndarray:
    """Vectorized is_square; the float root is corrected and checked in integers."""
    v = np.asarray(values, dtype=np.int64)
    clipped = np.maximum(v, 0)
    r = np.minimum(np.floor(np.sqrt(clipped.astype(np.float64))).astype(np.int64), ROOT_MAX)
    r = np.where(r * r > clipped, r - 1, r)
    # (r + 1)^2 wraps around for r = ROOT_MAX, hence the guard
    r = np.where((r < ROOT_MAX) & ((r + 1) * (r + 1) <= clipped), r + 1, r)
    return (v >= 0) & (r * r == v)


def _window(lo: int, hi: int) -> np.ndarray:
    if lo < 1 or hi <= lo:
        raise InvalidArgumentError(f"window [{lo}, {hi}) must be non-empty and start at 1 or above")
    return np.arange(lo, hi, dtype=np.int64)


def totient_window(lo: int, hi: int) -> np.ndarray:
    """φ(n) for every n in [lo, hi)."""
    n = _window(lo, hi)
    phi = n.copy()
    rest = n.copy()
    for p in window_primes(isqrt(hi - 1)).tolist():
        start = -(-lo // p) * p
        if start >= hi:
            continue
        idx = slice(start - lo, None, p)
        phi[idx] -= phi[idx] // p
        sub = rest[idx]
        sub //= p
        divisible = sub % p == 0
        while divisible.any():
            sub[divisible] //= p
            divisible = sub % p == 0
    # what is left above 1 is a single prime larger than √hi
    big = rest > 1
    phi[big] -= phi[big] // rest[big]
    return phi


def divisor_count_window(lo: int, hi: int) -> np.ndarray:
    """σ₀(n) for every n in [lo, hi)."""
    n = _window(lo, hi)
    tau = np.ones_like(n)
    rest = n.copy()
    for p in window_primes(isqrt(hi - 1)).tolist():
        start = -(-lo // p) * p
        if start >= hi:
            continue
        idx = slice(start - lo, None, p)
        sub = rest[idx]
        exponent = np.zeros(len(sub), dtype=np.int64)
        divisible = np.ones(len(sub), dtype=bool)
        while divisible.any():
            sub[divisible] //= p
            exponent[divisible] += 1
            divisible = sub % p == 0
        tau[idx] *= exponent + 1
    tau[rest > 1] *= 2
    return tau
