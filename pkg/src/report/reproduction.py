"""Recompute published table rows and diff them against the embedded values."""

import io
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd

from config.settings import Config, config as default_config
from .tables import TIERS, PublishedTable, TableRow, select_tables
from ..helpers.errors import ConfigurationError
from ..numtheory.primes import PrimeSieve
from ..solvers import SolverOrchestrator, build_solvers

logger = logging.getLogger("reproduction")

COLUMNS = ["table_id", "m", "expected", "computed", "status", "elapsed", "reason"]
FORMATS = ("text", "csv", "json")


@dataclass
class ReportEntry:
    table_id: str
    m: int
    expected: int
    computed: Optional[int] = None
    status: str = "skipped"  # pass, fail, skipped
    elapsed: float = 0.0
    reason: Optional[str] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            'table_id': self.table_id,
            'm': self.m,
            'expected': self.expected,
            'computed': self.computed,
            'status': self.status,
            'elapsed': round(self.elapsed, 3),
            'reason': self.reason,
        }


@dataclass
class ReproductionReport:
    tier: str = "quick"
    entries: List[ReportEntry] = field(default_factory=list)

    @property
    def summary(self) -> Dict[str, int]:
        counts = {'pass': 0, 'fail': 0, 'skipped': 0}
        for entry in self.entries:
            counts[entry.status] += 1
        return counts

    @property
    def exit_code(self) -> int:
        return 0 if self.summary['fail'] == 0 else 1

    def to_dict(self) -> Dict[str, object]:
        return {'entries': [entry.to_dict() for entry in self.entries], 'summary': self.summary}


def build_sieve(tier: str, settings: Config = default_config) -> PrimeSieve:
    """A sieve sized for the tier: the extended tier gets the extended bound."""
    sieve_config = settings.sieve
    bound = sieve_config.global_bound
    if tier == "extended":
        bound = max(bound, sieve_config.extended_bound)
    return PrimeSieve.from_config(sieve_config, bound=bound)


def run_reproduction(tier: str = "quick", table_filter: Optional[List[str]] = None,
                     sieve: Optional[PrimeSieve] = None, threads: Optional[int] = None,
                     settings: Config = default_config) -> ReproductionReport:
    if tier not in TIERS:
        raise ConfigurationError(f"unknown tier {tier!r}; expected one of {', '.join(TIERS)}")
    tables: List[PublishedTable] = select_tables(table_filter)
    sieve = sieve or build_sieve(tier, settings)
    threads = threads or settings.sieve.threads

    report = ReproductionReport(tier)
    selected: List[TableRow] = []
    for table in tables:
        runnable = set(table.rows_for_tier(tier))
        for row in table.rows:
            if row in runnable:
                selected.append(row)
            else:
                report.entries.append(ReportEntry(row.table_id, row.m, row.expected,
                                                  reason=f"cost class {row.cost_class} above tier {tier}"))

    orchestrator = SolverOrchestrator(num_workers=threads)
    for solver in build_solvers(sieve).values():
        orchestrator.register_solver(solver)
    logger.info(f"Reproducing {len(selected)} rows at tier {tier} with {threads} workers")
    tasks = orchestrator.solve_all([(row.table_id, row.payload()) for row in selected])

    status = orchestrator.status()
    logger.debug(f"Solvers finished {status['completed']} rows, {status['failed']} failed")

    for row, task in zip(selected, tasks):
        entry = ReportEntry(row.table_id, row.m, row.expected, elapsed=task.elapsed)
        if task.status == "completed":
            entry.computed = task.computed
            entry.status = "pass" if entry.computed == row.reference else "fail"
            if entry.status == "fail":
                entry.reason = f"computed value differs from the reference value {row.reference}"
                logger.error(f"{row.table_id} m={row.m}: expected {row.reference}, computed {entry.computed}")
            elif row.erratum is not None:
                entry.reason = f"erratum: published {row.expected}, compared against {row.erratum} ({row.note})"
        else:
            entry.status = "fail"
            entry.reason = task.error
        report.entries.append(entry)

    order = {table.table_id: i for i, table in enumerate(tables)}
    report.entries.sort(key=lambda e: (order[e.table_id], e.m))
    summary = report.summary
    logger.info(f"Reproduction finished: {summary['pass']} pass, {summary['fail']} fail, {summary['skipped']} skipped")
    return report


def emit(report: ReproductionReport, output_format: str = "text") -> str:
    if output_format == "json":
        return json.dumps(report.to_dict(), separators=(",", ":"))

    frame = pd.DataFrame([entry.to_dict() for entry in report.entries], columns=COLUMNS)
    frame = frame.astype({"m": "Int64", "expected": "Int64", "computed": "Int64"})
    if output_format == "csv":
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue()
    if output_format == "text":
        summary = report.summary
        footer = f"pass: {summary['pass']}  fail: {summary['fail']}  skipped: {summary['skipped']}"
        body = frame.astype(object).where(frame.notna(), "").to_string(index=False) if len(frame) else "(no entries)"
        return f"{body}\n{footer}\n"
    raise ConfigurationError(f"unknown output format {output_format!r}; expected one of {', '.join(FORMATS)}")
