"""S(m) = max{k·m − p_k : k >= 1} and the checks built around it.

The scan over k stops at ⌊e^{m+1}⌋ or earlier: for k >= 2,
p_k >= k(log k + log log k − 1), so k·m − p_k <= −k·(log k + log log k − 1 − m).
Once that bracket is positive the bound only decreases, and as soon as it
drops below the running maximum no later k can win.
"""

import logging
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from typing import Dict, List, Optional

import numpy as np

from .primes import PrimeCursor, PrimeSieve, PiCheckpoint
from . import search
from ..helpers.errors import BoundExceededError, InvalidArgumentError

logger = logging.getLogger("sfunction")

PRECISION = 50
# relative slack applied to real-valued endpoints so inequality passes are conservative
SLACK = Decimal("1e-40")
INTERVAL_WINDOW = 10 ** 4


def _exp(x: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = PRECISION
        return Decimal(x).exp()


def s_cutoff(m: int) -> int:
    """⌊e^{m+1}⌋, float estimate confirmed against a 50-digit value."""
    exact = _exp(m + 1)
    try:
        estimate = math.floor(math.exp(m + 1))
    except OverflowError:
        estimate = int(exact)
    # the float floor can be off by one near an integer or past 2^53
    for candidate in (estimate - 1, estimate, estimate + 1):
        if Decimal(candidate) <= exact < Decimal(candidate + 1):
            return candidate
    return int(exact)


def rosser_upper(j: int) -> int:
    """An integer >= p_j, from p_j <= j(log j + log log j) for j >= 6."""
    if j < 6:
        return (2, 3, 5, 7, 11)[j - 1]
    return math.ceil(j * (math.log(j) + math.log(math.log(j)))) + 1


def theory_horizon(m: int, bound: int) -> int:
    """Upper estimate of p_{K+1} for K = ⌊e^{m+1}⌋, capped at ``bound``.

    A witness of π(n) = (n + a)/m with a >= 0 has π(n) <= K, so n < p_{K+1}.
    """
    k_cut = s_cutoff(m)
    if k_cut > bound:
        return bound
    return min(rosser_upper(k_cut + 1), bound)


@dataclass
class SFunctionResult:
    m: int
    s_value: int
    argmax_ks: List[int]
    cutoff_used: int
    early_terminated: bool

    def to_record(self) -> Dict[str, object]:
        return {
            'm': self.m, 's': self.s_value, 'argmax_ks': list(self.argmax_ks),
            'cutoff_used': self.cutoff_used, 'early_terminated': self.early_terminated,
        }


def _tail_is_beaten(k: int, m: int, best: int) -> bool:
    """True when every j > k has j·m − p_j < best by the Dusart bound."""
    if k < 3:
        return False
    bracket = math.log(k) + math.log(math.log(k)) - 1 - m
    return bracket > 1e-9 and k * bracket > -best + 1e-6


def compute_S(m: int, sieve: PrimeSieve, early_termination: bool = True) -> SFunctionResult:
    if m < 1:
        raise InvalidArgumentError(f"S(m) needs m >= 1, got {m}")
    k_cut = s_cutoff(m)
    cursor = PrimeCursor(sieve, PiCheckpoint(0, 0))
    best: Optional[int] = None
    argmax: List[int] = []
    k_done = 0

    while k_done < k_cut:
        if cursor.position >= sieve.bound:
            raise BoundExceededError(k_cut, sieve.bound,
                                     f"S({m}) needs primes up to p_k for k =")
        primes = cursor.take_through(min(cursor.position + sieve.segment_length, sieve.bound))
        if len(primes) == 0:
            continue
        ks = np.arange(k_done + 1, k_done + 1 + len(primes), dtype=np.int64)
        keep = ks <= k_cut
        ks, primes = ks[keep], primes[keep]
        values = ks * m - primes
        block_best = int(values.max())
        if best is None or block_best > best:
            best = block_best
            argmax = ks[values == block_best].tolist()
        elif block_best == best:
            argmax.extend(ks[values == block_best].tolist())
        k_done = int(ks[-1])

        if early_termination and k_done < k_cut and _tail_is_beaten(k_done, m, best):
            logger.info(f"S({m}) = {best}: early termination at k={k_done} (cutoff {k_cut})")
            return SFunctionResult(m, best, argmax, k_done, True)

    logger.info(f"S({m}) = {best}: scanned the full cutoff k={k_cut}")
    return SFunctionResult(m, best, argmax, k_cut, False)


@dataclass
class GrowthRow:
    m: int
    s_value: int
    ratio_growth: Optional[bool] = None   # (m−1)S(m+1) > mS(m)
    s_bounds: Optional[bool] = None       # e^{m−1}/(m−1) < S(m) < (m−1)e^{m+1}
    argmax_floor: Optional[bool] = None   # least argmax k > e^{m−1}/(m−1)^2
    root_monotone: Optional[bool] = None  # S(m)^{1/m} < S(m+1)^{1/(m+1)}, sampled only

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class GrowthReport:
    rows: List[GrowthRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        checks = [getattr(row, name) for row in self.rows
                  for name in ("ratio_growth", "s_bounds", "argmax_floor")]
        return all(c for c in checks if c is not None)

    @property
    def monotone_sample(self) -> bool:
        return all(row.root_monotone for row in self.rows if row.root_monotone is not None)


def verify_growth(m_max: int, sieve: PrimeSieve) -> GrowthReport:
    if m_max < 1:
        raise InvalidArgumentError(f"m_max must be >= 1, got {m_max}")
    results = {m: compute_S(m, sieve) for m in range(1, m_max + 1)}
    report = GrowthReport()
    for m in range(1, m_max + 1):
        s = results[m].s_value
        row = GrowthRow(m, s)
        if m + 1 <= m_max:
            s_next = results[m + 1].s_value
            row.ratio_growth = (m - 1) * s_next > m * s
            if m >= 2:
                row.root_monotone = s ** (m + 1) < s_next ** m
        if m >= 3:
            with localcontext() as ctx:
                ctx.prec = PRECISION
                lower = _exp(m - 1) / (m - 1) * (1 + SLACK)
                upper = (m - 1) * _exp(m + 1) * (1 - SLACK)
                least_k_floor = _exp(m - 1) / ((m - 1) ** 2) * (1 + SLACK)
                row.s_bounds = lower < Decimal(s) < upper
                row.argmax_floor = Decimal(min(results[m].argmax_ks)) > least_k_floor
        report.rows.append(row)
    return report


def interval_cover_check(m: int, a_lo: int, sieve: PrimeSieve) -> bool:
    """Every a in [a_lo, S(m)] lies in some I_k or has a witness found by search.

    I_k = {k·m − p_{k+1} + 1, ..., k·m − p_{k+1} + m} for k = 0..cutoff.
    """
    if m < 1:
        raise InvalidArgumentError(f"m must be >= 1, got {m}")
    if a_lo < -INTERVAL_WINDOW:
        raise InvalidArgumentError(f"a_lo must be >= {-INTERVAL_WINDOW}, got {a_lo}")
    result = compute_S(m, sieve)
    s_value = result.s_value
    if a_lo > s_value:
        return True

    width = s_value - a_lo + 1
    primes = sieve.first_primes(result.cutoff_used + 1)
    ks = np.arange(0, len(primes), dtype=np.int64)
    starts = ks * m - primes + 1
    ends = starts + m - 1
    starts = np.clip(starts, a_lo, s_value + 1)
    ends = np.clip(ends, a_lo - 1, s_value)
    valid = starts <= ends
    diff = np.zeros(width + 1, dtype=np.int64)
    np.add.at(diff, starts[valid] - a_lo, 1)
    np.add.at(diff, ends[valid] - a_lo + 1, -1)
    covered = np.cumsum(diff[:width]) > 0

    uncovered = (a_lo + np.flatnonzero(~covered)).tolist()
    logger.info(f"m={m}: {width - len(uncovered)} of {width} values in some I_k, "
                f"{len(uncovered)} left to direct search")
    for a in uncovered:
        if search.least_n_ratio(m, a, sieve).witness_n is None:
            logger.warning(f"m={m}: no witness for a={a}")
            return False
    return True


@dataclass
class WitnessRangeReport:
    m: int
    s_value: int
    missing: List[int] = field(default_factory=list)     # a <= S(m) without a witness
    unexpected: List[int] = field(default_factory=list)  # a > S(m) with a witness

    @property
    def passed(self) -> bool:
        return not self.missing and not self.unexpected


def witness_range_check(m: int, sieve: PrimeSieve, below: int = 25, above: int = 25) -> WitnessRangeReport:
    """Witnesses exist for a in [−below, S(m)] and not for a in [S(m)+1, S(m)+above]."""
    s_value = compute_S(m, sieve).s_value
    report = WitnessRangeReport(m, s_value)
    for a in range(-below, s_value + 1):
        if search.least_n_ratio(m, a, sieve).witness_n is None:
            report.missing.append(a)
    horizon = theory_horizon(m, sieve.bound)
    for a in range(s_value + 1, s_value + above + 1):
        outcome = search.least_n_ratio(m, a, sieve, n_limit=horizon)
        if outcome.witness_n is not None:
            report.unexpected.append(a)
    return report
