"""Published ground-truth tables, loaded from ``data/published_tables.json``.

The file is checked against a pinned SHA-256 digest on load, so any edit to
the embedded values is caught before a reproduction run uses them.
"""

import hashlib
import json
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional

from ..helpers.errors import ConfigurationError

logger = logging.getLogger("tables")

DATA_FILE = Path(__file__).parent / "data" / "published_tables.json"
DATA_SHA256 = "e5bb0ee9af2268196b0b67ec0102f69d7867f6af93795d32603d30179fb0d0f0"

TABLE_ORDER = ["T3.1", "T3.2a", "T3.2b", "T3.3", "T3.4", "T4.1", "T4.2", "T4.3", "EX4.1", "EX4.2"]
TIERS = ["quick", "standard", "extended"]
QUICK_WORKLOAD = 5 * 10 ** 7
STANDARD_WORKLOAD = 2 ** 31


@dataclass(frozen=True)
class TableRow:
    table_id: str
    m: int
    expected: int
    variant: Optional[str] = None
    # corrected value for a misprinted published entry; `expected` stays as printed
    erratum: Optional[int] = None
    note: Optional[str] = None

    @property
    def reference(self) -> int:
        """The value a computation is compared against."""
        return self.expected if self.erratum is None else self.erratum

    @property
    def workload(self) -> int:
        return estimate_workload(self.table_id, self.m, self.reference)

    @property
    def cost_class(self) -> str:
        return cost_class(self.workload)

    def payload(self) -> Dict[str, object]:
        payload = {'m': self.m, 'expected': self.reference}
        if self.variant:
            payload['variant'] = self.variant
        return payload


@dataclass(frozen=True)
class PublishedTable:
    table_id: str
    source: str
    rows: List[TableRow]

    def rows_for_tier(self, tier: str) -> List[TableRow]:
        allowed = TIERS[:TIERS.index(tier) + 1]
        return [row for row in self.rows if row.cost_class in allowed]


def _prime_upper(k: float) -> float:
    if k < 6:
        return 13.0
    return k * (math.log(k) + math.log(math.log(k)))


def _s_stop_index(m: int) -> float:
    """Smallest k where log k + log log k − 1 exceeds m, found by doubling then bisection."""
    lo, hi = 3.0, 6.0
    while math.log(hi) + math.log(math.log(hi)) - 1 <= m:
        lo, hi = hi, hi * 2
    for _ in range(60):
        mid = (lo + hi) / 2
        if math.log(mid) + math.log(math.log(mid)) - 1 <= m:
            lo = mid
        else:
            hi = mid
    return hi


def estimate_workload(table_id: str, m: int, expected: int) -> int:
    """Largest integer a row's computation has to sieve."""
    if table_id == "T3.1":
        return int(_prime_upper(_s_stop_index(m)))
    if table_id in ("T3.2a", "T3.2b"):
        return expected
    if table_id == "EX4.2":
        return int(_prime_upper(max(expected, m)))
    return m * expected


def cost_class(workload: int) -> str:
    if workload <= QUICK_WORKLOAD:
        return "quick"
    if workload <= STANDARD_WORKLOAD:
        return "standard"
    return "extended"


def verify_checksum(path: Path = DATA_FILE, expected: str = DATA_SHA256) -> bytes:
    raw = path.read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != expected:
        raise ConfigurationError(f"{path} checksum {digest} does not match the pinned {expected}")
    return raw


@lru_cache(maxsize=1)
def load_tables() -> Dict[str, PublishedTable]:
    raw = verify_checksum()
    document = json.loads(raw.decode("utf-8"))
    tables = {}
    for entry in document['tables']:
        rows = [TableRow(entry['table_id'], row['m'], row['expected'], row.get('variant'),
                         row.get('erratum'), row.get('note'))
                for row in entry['rows']]
        rows.sort(key=lambda row: row.m)
        tables[entry['table_id']] = PublishedTable(entry['table_id'], entry['source'], rows)
    if list(tables) != TABLE_ORDER:
        raise ConfigurationError(f"embedded tables {list(tables)} differ from {TABLE_ORDER}")
    logger.debug(f"Loaded {sum(len(t.rows) for t in tables.values())} rows from {DATA_FILE.name}")
    return tables


def select_tables(table_filter: Optional[List[str]] = None) -> List[PublishedTable]:
    tables = load_tables()
    if not table_filter:
        return [tables[table_id] for table_id in TABLE_ORDER]
    unknown = [table_id for table_id in table_filter if table_id not in tables]
    if unknown:
        raise ConfigurationError(f"unknown table id(s): {', '.join(unknown)}; expected one of {', '.join(TABLE_ORDER)}")
    return [tables[table_id] for table_id in TABLE_ORDER if table_id in table_filter]
