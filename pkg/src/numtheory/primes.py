"""Segmented sieve of Eratosthenes: streaming primes, exact π(x), p_k and resumable scans.

Segments store an odd-only bitmap (index i stands for ``first_odd + 2*i``) and are
sieved by the base primes up to √bound, computed once per ``PrimeSieve``.
Any sequential walk over the integers records a ``PiCheckpoint`` at every multiple
of the checkpoint stride; later queries start from the nearest such anchor.
"""

import bisect
import logging
import threading
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np

from config.settings import SieveConfig, config
from ..helpers.checkpoints import CheckpointStore, PiCheckpoint, ORIGIN
from ..helpers.errors import BoundExceededError, CorruptCheckpointError, InvalidArgumentError, INT64_MAX

logger = logging.getLogger("primes")

__all__ = [
    "SieveSegment", "PiCheckpoint", "PrimeIndex", "PrimeSieve", "PrimeCursor",
    "ORIGIN", "simple_sieve",
]

EMPTY = np.zeros(0, dtype=np.int64)


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit."""
    if limit < 2:
        return EMPTY.copy()
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p:limit + 1:p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@dataclass
class SieveSegment:
    lo: int
    hi: int
    bitmap: np.ndarray
    prime_count: int

    @property
    def first_odd(self) -> int:
        return self.lo | 1

    @property
    def has_two(self) -> bool:
        return self.lo <= 2 < self.hi

    def primes(self) -> np.ndarray:
        odd = self.first_odd + 2 * np.flatnonzero(self.bitmap).astype(np.int64)
        if self.has_two:
            return np.concatenate((np.array([2], dtype=np.int64), odd))
        return odd

    def flags(self) -> np.ndarray:
        """Primality of every integer in [lo, hi)."""
        full = np.zeros(self.hi - self.lo, dtype=bool)
        full[self.first_odd - self.lo::2] = self.bitmap
        if self.has_two:
            full[2 - self.lo] = True
        return full

    def count_through(self, x: int) -> int:
        """Number of primes in [lo, x]."""
        if x < self.lo:
            return 0
        x = min(x, self.hi - 1)
        count = 0
        if x >= self.first_odd:
            count = int(np.count_nonzero(self.bitmap[:(x - self.first_odd) // 2 + 1]))
        if self.lo <= 2 <= x:
            count += 1
        return count


@dataclass(frozen=True)
class PrimeIndex:
    k: int
    p_k: int


class PrimeSieve:
    """Prime oracle up to a global bound.

    Safe for concurrent read-only queries: the base-prime table is immutable and
    anchor bookkeeping happens under a lock.
    """

    def __init__(self, bound: Optional[int] = None, segment_length: Optional[int] = None,
                 threads: Optional[int] = None, checkpoint_stride: Optional[int] = None,
                 store: Optional[CheckpointStore] = None, verify_checkpoints: Optional[bool] = None,
                 sieve_config: Optional[SieveConfig] = None):
        cfg = sieve_config or config.sieve
        self.bound = int(bound if bound is not None else cfg.global_bound)
        self.segment_length = int(segment_length if segment_length is not None else cfg.segment_length)
        self.threads = max(1, int(threads if threads is not None else cfg.threads))
        self.stride = int(checkpoint_stride if checkpoint_stride is not None else cfg.checkpoint_stride)
        self.verify_checkpoints = cfg.verify_checkpoints if verify_checkpoints is None else verify_checkpoints
        self.store = store

        if self.bound < 2 or self.bound > INT64_MAX // 4:
            raise InvalidArgumentError(f"sieve bound {self.bound} out of range")
        if self.segment_length < 16:
            raise InvalidArgumentError(f"segment length {self.segment_length} too small")
        if self.stride < 1:
            raise InvalidArgumentError("checkpoint stride must be positive")

        self.base_primes = simple_sieve(isqrt(self.bound) + 1)
        self._odd_base = self.base_primes[1:].tolist()

        self._lock = threading.Lock()
        self._anchors: List[PiCheckpoint] = [ORIGIN]
        self._anchor_ns: List[int] = [ORIGIN.n]
        self._flag_table = np.zeros(0, dtype=bool)

        if store is not None:
            self._adopt_store(store)

        logger.debug(f"Sieve ready: bound={self.bound}, segment={self.segment_length}, "
                     f"threads={self.threads}, base primes={len(self.base_primes)}")

    @classmethod
    def from_config(cls, sieve_config: Optional[SieveConfig] = None, bound: Optional[int] = None) -> "PrimeSieve":
        """Sieve wired to the configured checkpoint file, if any."""
        cfg = sieve_config or config.sieve
        store = CheckpointStore(cfg.checkpoint_path, cfg.checkpoint_stride) if cfg.checkpoint_path else None
        return cls(bound=bound, store=store, sieve_config=cfg)

    def _adopt_store(self, store: CheckpointStore):
        rows = store.load()
        if self.verify_checkpoints:
            store.verify(self)
        for row in rows:
            if row.n <= self.bound:
                self._insert_anchor(row, persist=False)

    # -- bookkeeping -----------------------------------------------------

    def _check(self, x: int, what: str = "argument"):
        if x > self.bound:
            raise BoundExceededError(x, self.bound, what)

    def _insert_anchor(self, checkpoint: PiCheckpoint, persist: bool = True):
        with self._lock:
            i = bisect.bisect_left(self._anchor_ns, checkpoint.n)
            if i < len(self._anchor_ns) and self._anchor_ns[i] == checkpoint.n:
                if self._anchors[i].pi_n != checkpoint.pi_n:
                    raise CorruptCheckpointError(
                        f"conflicting anchors at n={checkpoint.n}: {self._anchors[i].pi_n} vs {checkpoint.pi_n}"
                    )
                return
            self._anchors.insert(i, checkpoint)
            self._anchor_ns.insert(i, checkpoint.n)
            if persist and self.store is not None:
                self.store.append(checkpoint)

    def nearest_anchor(self, x: int) -> PiCheckpoint:
        """Largest known anchor with n <= x (the origin (1, 0) for x >= 1)."""
        if x < 1:
            return PiCheckpoint(0, 0)
        with self._lock:
            i = bisect.bisect_right(self._anchor_ns, x) - 1
            return self._anchors[i]

    @property
    def anchors(self) -> List[PiCheckpoint]:
        with self._lock:
            return list(self._anchors)

    # -- segments --------------------------------------------------------

    def segment(self, lo: int, hi: int) -> SieveSegment:
        if lo < 0 or hi <= lo:
            raise InvalidArgumentError(f"empty or negative window [{lo}, {hi})")
        if hi - lo > self.segment_length:
            raise InvalidArgumentError(f"window of {hi - lo} exceeds segment length {self.segment_length}")
        self._check(hi - 1, "segment end")

        first_odd = lo | 1
        count = max(0, (hi - first_odd + 1) // 2)
        bitmap = np.ones(count, dtype=bool)
        for p in self._odd_base:
            pp = p * p
            if pp >= hi:
                break
            start = max(pp, ((first_odd + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start >= hi:
                continue
            bitmap[(start - first_odd) // 2::p] = False
        if first_odd == 1 and count:
            bitmap[0] = False

        prime_count = int(np.count_nonzero(bitmap)) + (1 if lo <= 2 < hi else 0)
        return SieveSegment(lo, hi, bitmap, prime_count)

    def iter_segments(self, lo: int, hi: int) -> Iterator[SieveSegment]:
        """Segments covering [lo, hi) in ascending order.

        With more than one thread, segments are sieved concurrently but released
        strictly in order: segment i is yielded only after every segment below it.
        """
        if hi <= lo:
            return
        self._check(hi - 1, "scan end")
        bounds = ((a, min(a + self.segment_length, hi)) for a in range(lo, hi, self.segment_length))

        if self.threads == 1:
            for a, b in bounds:
                yield self.segment(a, b)
            return

        with ThreadPoolExecutor(max_workers=self.threads, thread_name_prefix="sieve") as executor:
            pending = deque()
            for a, b in bounds:
                pending.append(executor.submit(self.segment, a, b))
                if len(pending) >= 2 * self.threads:
                    yield pending.popleft().result()
            while pending:
                yield pending.popleft().result()

    def walk(self, start: PiCheckpoint, limit: int) -> Iterator[Tuple[SieveSegment, int]]:
        """Yield (segment, π(segment.lo − 1)) for segments covering (start.n, limit]."""
        count = start.pi_n
        started = time.monotonic()
        for seg in self.iter_segments(start.n + 1, limit + 1):
            self._record_stride_anchors(seg, count, started)
            yield seg, count
            count += seg.prime_count

    def _record_stride_anchors(self, seg: SieveSegment, count: int, started: float):
        t = -(-seg.lo // self.stride) * self.stride
        while t < seg.hi:
            pi_t = count + seg.count_through(t)
            self._insert_anchor(PiCheckpoint(t, pi_t, self.stride))
            logger.info(f"pi({t}) = {pi_t} [{time.monotonic() - started:.1f}s]")
            t += self.stride

    # -- queries ---------------------------------------------------------

    def count_primes(self, lo: int, hi: int) -> int:
        """Number of primes in [lo, hi)."""
        return sum(seg.prime_count for seg in self.iter_segments(max(lo, 0), hi))

    def primes_in(self, lo: int, hi: int) -> np.ndarray:
        if hi <= lo:
            return EMPTY.copy()
        chunks = [seg.primes() for seg in self.iter_segments(max(lo, 0), hi)]
        return np.concatenate(chunks) if chunks else EMPTY.copy()

    def pi(self, x: int) -> int:
        if x < 0:
            raise InvalidArgumentError(f"pi is defined here for x >= 0, got {x}")
        self._check(x)
        if x < 2:
            return 0
        if x < len(self._flag_table):
            return int(np.count_nonzero(self._flag_table[:x + 1]))
        anchor = self.nearest_anchor(x)
        count = anchor.pi_n
        for seg, _ in self.walk(anchor, x):
            count += seg.prime_count
        return count

    def checkpoint_at(self, x: int) -> PiCheckpoint:
        return PiCheckpoint(x, self.pi(x), self.stride)

    def nth_prime(self, k: int) -> int:
        if k < 1:
            raise InvalidArgumentError(f"prime index must be >= 1, got {k}")
        with self._lock:
            pis = [a.pi_n for a in self._anchors]
            i = bisect.bisect_left(pis, k) - 1
            anchor = self._anchors[max(i, 0)]
        for seg, count in self.walk(anchor, self.bound):
            if count + seg.prime_count >= k:
                return int(seg.primes()[k - count - 1])
        raise BoundExceededError(k, self.bound, "the prime p_k for k =")

    def prime_index(self, k: int) -> PrimeIndex:
        return PrimeIndex(k, self.nth_prime(k))

    def first_primes(self, k: int) -> np.ndarray:
        """p_1, ..., p_k as an array."""
        if k < 1:
            return EMPTY.copy()
        cursor = PrimeCursor(self, PiCheckpoint(0, 0))
        chunks = []
        have = 0
        while have < k:
            if cursor.position >= self.bound:
                raise BoundExceededError(k, self.bound, "the prime p_k for k =")
            chunk = cursor.take_through(min(cursor.position + self.segment_length, self.bound))
            chunks.append(chunk)
            have += len(chunk)
        return np.concatenate(chunks)[:k]

    def prime_stream(self, lo: int, hi: int) -> Iterator[int]:
        if lo < 0 or hi <= lo:
            raise InvalidArgumentError(f"prime_stream needs 0 <= lo < hi, got [{lo}, {hi})")
        self._check(hi - 1, "window end")
        for seg in self.iter_segments(lo, hi):
            yield from seg.primes().tolist()

    def prime_flags(self, limit: int) -> np.ndarray:
        """Boolean table of primality for 0..limit (cached and grown geometrically)."""
        self._check(limit)
        table = self._flag_table
        if limit < len(table):
            return table[:limit + 1]
        size = min(max(limit + 1, 2 * len(table)), self.bound + 1)
        chunks = [seg.flags() for seg in self.iter_segments(0, size)]
        table = np.concatenate(chunks)
        self._flag_table = table
        return table[:limit + 1]

    def pi_table(self, limit: int) -> np.ndarray:
        """Array whose element x is π(x), for 0 <= x <= limit."""
        return np.cumsum(self.prime_flags(limit), dtype=np.int64)

    def is_prime(self, x: int) -> bool:
        if x < 2:
            return False
        self._check(x)
        if x < len(self._flag_table):
            return bool(self._flag_table[x])
        return bool(self.segment(x, x + 1).prime_count)

    def nth_composite(self, m: int) -> int:
        """The m-th element of 4, 6, 8, 9, 10, 12, ..."""
        if m < 1:
            raise InvalidArgumentError(f"composite index must be >= 1, got {m}")
        # composites <= n number n - 1 - π(n) for n >= 1
        with self._lock:
            usable = [a for a in self._anchors if a.n - 1 - a.pi_n < m]
        anchor = usable[-1] if usable else ORIGIN
        for seg, count in self.walk(anchor, self.bound):
            before = (seg.lo - 1) - 1 - count
            composite_counts = before + np.cumsum(~seg.flags(), dtype=np.int64)
            idx = int(np.searchsorted(composite_counts, m, side="left"))
            if idx < len(composite_counts):
                return seg.lo + idx
        raise BoundExceededError(m, self.bound, "the composite c_m for m =")

    def scan_pi(self, visit: Callable[[int, int], bool], from_checkpoint: Optional[PiCheckpoint] = None,
                until: Optional[int] = None) -> PiCheckpoint:
        """Call ``visit(n, π(n))`` for n = start+1, start+2, ... until it returns True.

        The halting pair is returned as the final checkpoint. ``until`` caps n;
        when it does not exceed the start the start checkpoint comes back unchanged.
        """
        start = from_checkpoint or ORIGIN
        if self.verify_checkpoints and from_checkpoint is not None:
            self.verify_checkpoint(start)
        limit = self.bound if until is None else min(until, self.bound)
        last = PiCheckpoint(start.n, start.pi_n, self.stride)
        if limit <= start.n:
            return last

        for seg, count in self.walk(start, limit):
            pis = count + np.cumsum(seg.flags(), dtype=np.int64)
            for offset, pi_n in enumerate(pis.tolist()):
                n = seg.lo + offset
                last = PiCheckpoint(n, pi_n, self.stride)
                if visit(n, pi_n):
                    return last
        return last

    def verify_checkpoint(self, checkpoint: PiCheckpoint) -> bool:
        """Recount from the anchor below ``checkpoint``; raise on mismatch."""
        previous = self.nearest_anchor(checkpoint.n - 1)
        fresh = previous.pi_n + self.count_primes(previous.n + 1, checkpoint.n + 1)
        if fresh != checkpoint.pi_n:
            raise CorruptCheckpointError(
                f"checkpoint claims pi({checkpoint.n}) = {checkpoint.pi_n}, recount gives {fresh}"
            )
        return True


class PrimeCursor:
    """Forward-only walk over the primes that tracks π at its position."""

    def __init__(self, sieve: PrimeSieve, start: Optional[PiCheckpoint] = None):
        start = start or ORIGIN
        self.sieve = sieve
        self.position = start.n
        self.count = start.pi_n

    @property
    def checkpoint(self) -> PiCheckpoint:
        return PiCheckpoint(self.position, self.count, self.sieve.stride)

    def take_through(self, x: int) -> np.ndarray:
        """Primes in (position, x]; moves the cursor to x."""
        if x <= self.position:
            return EMPTY.copy()
        chunks = [seg.primes() for seg, _ in self.sieve.walk(self.checkpoint, x)]
        primes = np.concatenate(chunks) if chunks else EMPTY.copy()
        self.count += len(primes)
        self.position = x
        return primes
