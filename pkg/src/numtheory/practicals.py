"""Practical numbers: recognition, counting P(x), the k-th practical q_k and T(m).

Recognition uses Stewart's structural criterion: with n = p_1^a_1 ... p_r^a_r
(p_1 < ... < p_r), n > 1 is practical iff p_1 = 2 and every
p_{i+1} <= 1 + σ(p_1^a_1 ... p_i^a_i). The subset-sum definition is kept as an
oracle for small n.
"""

import logging
import math
import os
from dataclasses import dataclass
from math import isqrt
from pathlib import Path
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from config.settings import PracticalConfig, config
from .arith import divisor_sum, factorize, window_primes
from ..helpers.errors import BoundExceededError, CutoffNotReachedError, InvalidArgumentError

logger = logging.getLogger("practicals")

WINDOW = 2 ** 18


@dataclass(frozen=True)
class PracticalIndex:
    k: int
    q_k: int


@dataclass
class TResult:
    m: int
    t_value: int
    argmax_ks: List[int]
    cutoff_used: int
    heuristic: bool = True

    def to_record(self):
        return {
            'm': self.m, 't': self.t_value, 'argmax_ks': list(self.argmax_ks),
            'cutoff_used': self.cutoff_used, 'heuristic': self.heuristic,
        }


def is_practical(n: int) -> bool:
    if n < 1:
        raise InvalidArgumentError(f"is_practical needs n >= 1, got {n}")
    if n == 1:
        return True
    if n % 2:
        return False
    sigma = 1
    for p, e in factorize(n).factors:
        if p > 1 + sigma:
            return False
        sigma *= divisor_sum(p ** e)
    return True


def subset_sum_practical(n: int) -> bool:
    """Definition check: every 1..n is a sum of distinct divisors of n."""
    divisors = set()
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            divisors.update((d, n // d))
    reach = 1
    for d in divisors:
        reach |= reach << d
    full = (1 << n) - 1
    return (reach >> 1) & full == full


def practical_flags(lo: int, hi: int) -> np.ndarray:
    """Practicality of every n in [lo, hi); only 1 and even n are candidates."""
    if lo < 1 or hi <= lo:
        raise InvalidArgumentError(f"window [{lo}, {hi}) must be non-empty and start at 1 or above")
    flags = np.zeros(hi - lo, dtype=bool)
    if lo == 1:
        flags[0] = True

    first_even = lo + (lo % 2)
    evens = np.arange(first_even, hi, 2, dtype=np.int64)
    if len(evens) == 0:
        return flags

    # the power of 2 first: σ(2^e) = 2^(e+1) - 1, and 2 <= 1 + σ(1) always holds
    rest = evens.copy()
    power = np.ones_like(rest)
    while True:
        divisible = rest % 2 == 0
        if not divisible.any():
            break
        rest[divisible] //= 2
        power[divisible] *= 2
    sigma = 2 * power - 1
    ok = np.ones(len(evens), dtype=bool)

    for p in window_primes(isqrt(hi - 1)).tolist()[1:]:
        # even multiples of p are the multiples of 2p, spaced p apart in `evens`
        start = -(-first_even // (2 * p)) * (2 * p)
        if start >= hi:
            continue
        idx = slice((start - first_even) // 2, None, p)
        ok[idx] &= p <= 1 + sigma[idx]
        sub = rest[idx]
        prime_power = np.ones(len(sub), dtype=np.int64)
        divisible = np.ones(len(sub), dtype=bool)
        while divisible.any():
            sub[divisible] //= p
            prime_power[divisible] *= p
            divisible = sub % p == 0
        sigma[idx] *= (prime_power * p - 1) // (p - 1)

    big = rest > 1
    ok[big] &= rest[big] <= 1 + sigma[big]
    flags[first_even - lo::2] = ok
    return flags


class PracticalScanner:
    """Ascending enumeration of practical numbers below a configured bound."""

    def __init__(self, bound: Optional[int] = None, window: int = WINDOW,
                 practical_config: Optional[PracticalConfig] = None):
        cfg = practical_config or config.practical
        self.config = cfg
        self.bound = int(bound if bound is not None else cfg.practical_bound)
        self.window = window

    def _check(self, x: int):
        if x > self.bound:
            raise BoundExceededError(x, self.bound, "practical scan")

    def windows(self, lo: int, hi: int) -> Iterator[Tuple[int, np.ndarray]]:
        """(window start, flags) pairs covering [lo, hi)."""
        self._check(hi - 1)
        for a in range(lo, hi, self.window):
            b = min(a + self.window, hi)
            yield a, practical_flags(a, b)

    def iter_practicals(self, limit: Optional[int] = None) -> Iterator[PracticalIndex]:
        limit = self.bound if limit is None else limit
        k = 0
        for a, flags in self.windows(1, limit + 1):
            for q in (a + np.flatnonzero(flags)).tolist():
                k += 1
                yield PracticalIndex(k, q)

    def practical_count(self, x: int) -> int:
        if x < 1:
            raise InvalidArgumentError(f"practical_count needs x >= 1, got {x}")
        return sum(int(np.count_nonzero(flags)) for _, flags in self.windows(1, x + 1))

    def kth_practical(self, k: int) -> int:
        if k < 1:
            raise InvalidArgumentError(f"practical index must be >= 1, got {k}")
        seen = 0
        for a, flags in self.windows(1, self.bound + 1):
            count = int(np.count_nonzero(flags))
            if seen + count >= k:
                return int(a + np.flatnonzero(flags)[k - seen - 1])
            seen += count
        raise BoundExceededError(k, self.bound, "the practical number q_k for k =")

    def compute_T(self, m: int) -> TResult:
        """T(m) = max over k of k·m − q_k, with a heuristic stopping rule.

        Scanning stops at k once q_k exceeds exp(growth·m) + offset and k·m − q_k
        has stayed negative since some k0 with k >= 10·k0.
        """
        if m < 1:
            raise InvalidArgumentError(f"T(m) needs m >= 1, got {m}")
        threshold = math.exp(self.config.t_growth_factor * m) + self.config.t_offset
        if threshold > self.bound:
            raise CutoffNotReachedError(
                f"T({m}): growth threshold {threshold:.0f} lies beyond the practical bound {self.bound}"
            )

        best: Optional[int] = None
        argmax: List[int] = []
        negative_since: Optional[int] = None
        for index in self.iter_practicals():
            k, q = index.k, index.q_k
            value = k * m - q
            if best is None or value > best:
                best, argmax = value, [k]
            elif value == best:
                argmax.append(k)

            if value < 0:
                if negative_since is None:
                    negative_since = k
            else:
                negative_since = None

            if negative_since is not None and q > threshold and k >= 10 * negative_since:
                logger.info(f"T({m}) = {best} stabilized at k={k} (q_k={q})")
                return TResult(m, best, argmax, k)

        raise CutoffNotReachedError(f"T({m}) did not stabilize below the practical bound {self.bound}")

    def least_n_practical_ratio(self, m: int, a: int, n_limit: Optional[int] = None) -> Optional[int]:
        """Least n >= 1 with P(n) = (n + a)/m, or None below n_limit."""
        if m < 1:
            raise InvalidArgumentError(f"m must be >= 1, got {m}")
        n_limit = self.bound if n_limit is None else min(n_limit, self.bound)
        count = 0
        for lo, flags in self.windows(1, n_limit + 1):
            counts = count + np.cumsum(flags, dtype=np.int64)
            ns = np.arange(lo, lo + len(flags), dtype=np.int64)
            hits = np.flatnonzero(m * counts == ns + a)
            if hits.size:
                return int(ns[hits[0]])
            count = int(counts[-1])
        return None

    def export_practicals(self, path: Union[str, Path], k_max: int) -> Path:
        """Write (k, q_k) for k <= k_max as CSV ``k,q`` through a temp file."""
        ks, qs = [], []
        for index in self.iter_practicals():
            if index.k > k_max:
                break
            ks.append(index.k)
            qs.append(index.q_k)
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        temp_file = path.with_name(path.name + ".tmp")
        pd.DataFrame({'k': ks, 'q': qs}).to_csv(temp_file, index=False, lineterminator="\n")
        os.replace(temp_file, path)
        logger.info(f"Exported {len(ks)} practical numbers to {path}")
        return path


def practical_count(x: int, bound: Optional[int] = None) -> int:
    return PracticalScanner(bound).practical_count(x)


def kth_practical(k: int, bound: Optional[int] = None) -> int:
    return PracticalScanner(bound).kth_practical(k)


def compute_T(m: int, bound: Optional[int] = None) -> TResult:
    return PracticalScanner(bound).compute_T(m)
