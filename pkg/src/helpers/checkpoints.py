import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from .errors import CorruptCheckpointError

HEADER = ["n", "pi"]


@dataclass(frozen=True, order=True)
class PiCheckpoint:
    """A persisted anchor (n, π(n))."""
    n: int
    pi_n: int
    stride: int = 0

    def to_dict(self):
        return {'n': self.n, 'pi': self.pi_n}


ORIGIN = PiCheckpoint(1, 0)


class CheckpointStore:
    """CSV file of strictly increasing (n, π(n)) anchors, rewritten atomically."""

    def __init__(self, path: Union[str, Path], stride: int = 10 ** 7):
        self.path = Path(path)
        self.stride = stride
        self.logger = logging.getLogger("checkpoints")
        self._rows: List[PiCheckpoint] = []

    @property
    def checkpoints(self) -> List[PiCheckpoint]:
        return list(self._rows)

    def load(self) -> List[PiCheckpoint]:
        """Read the file; a missing file is an empty store."""
        if not self.path.exists():
            self.logger.info(f"No checkpoint file at {self.path}, starting from origin")
            self._rows = []
            return []

        try:
            frame = pd.read_csv(self.path, dtype=str, keep_default_na=False)
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            raise CorruptCheckpointError(f"{self.path}: unreadable checkpoint file ({e})")

        if list(frame.columns) != HEADER:
            raise CorruptCheckpointError(f"{self.path}: expected header 'n,pi', got {','.join(frame.columns)}")

        try:
            ns = [int(v) for v in frame["n"]]
            pis = [int(v) for v in frame["pi"]]
        except ValueError as e:
            raise CorruptCheckpointError(f"{self.path}: non-integer field ({e})")

        rows = [PiCheckpoint(n, pi_n, self.stride) for n, pi_n in zip(ns, pis)]
        self._validate(rows)
        self._rows = rows
        self.logger.info(f"Loaded {len(rows)} checkpoints from {self.path}")
        return list(rows)

    def _validate(self, rows: List[PiCheckpoint]):
        previous: Optional[PiCheckpoint] = None
        for row in rows:
            if row.n < 0 or row.pi_n < 0 or row.pi_n > row.n:
                raise CorruptCheckpointError(f"{self.path}: impossible row n={row.n}, pi={row.pi_n}")
            if previous is not None:
                if row.n <= previous.n:
                    raise CorruptCheckpointError(f"{self.path}: n not strictly increasing at n={row.n}")
                if row.pi_n < previous.pi_n or row.pi_n - previous.pi_n > row.n - previous.n:
                    raise CorruptCheckpointError(f"{self.path}: pi inconsistent between n={previous.n} and n={row.n}")
            previous = row

    def verify(self, sieve) -> bool:
        """Recompute the last segment: π(last) − π(previous) must equal a fresh prime count."""
        if not self._rows:
            return True
        last = self._rows[-1]
        previous = self._rows[-2] if len(self._rows) > 1 else PiCheckpoint(0, 0)
        fresh = sieve.count_primes(previous.n + 1, last.n + 1)
        if previous.pi_n + fresh != last.pi_n:
            raise CorruptCheckpointError(
                f"{self.path}: recomputed pi({last.n}) = {previous.pi_n + fresh}, file says {last.pi_n}"
            )
        self.logger.info(f"Verified checkpoint n={last.n}")
        return True

    def append(self, checkpoint: PiCheckpoint) -> bool:
        """Add an anchor if it extends the file; returns True when written."""
        if self._rows and checkpoint.n <= self._rows[-1].n:
            return False
        self._rows.append(checkpoint)
        self.save()
        return True

    def save(self):
        """Write all rows through a temp file and rename."""
        self.path.parent.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame(
            {'n': [row.n for row in self._rows], 'pi': [row.pi_n for row in self._rows]},
            columns=HEADER,
        )
        temp_file = self.path.with_name(self.path.name + ".tmp")
        try:
            frame.to_csv(temp_file, index=False, encoding="utf-8", lineterminator="\n")
            os.replace(temp_file, self.path)
            self.logger.debug(f"Saved {len(self._rows)} checkpoints to {self.path}")
        except OSError as e:
            self.logger.error(f"Failed to save checkpoints: {str(e)}")
            if temp_file.exists():
                temp_file.unlink()
            raise
