import json

import pytest

from src.helpers.errors import ConfigurationError
from src.report import reproduction
from src.report.reproduction import ReportEntry, ReproductionReport, emit, run_reproduction
from src.report.tables import (
    TABLE_ORDER, PublishedTable, TableRow, cost_class, estimate_workload, load_tables, select_tables,
    verify_checksum,
)


def test_embedded_tables_load():
    tables = load_tables()
    assert list(tables) == TABLE_ORDER
    t31 = {row.m: row.expected for row in tables["T3.1"].rows}
    assert t31[1] == -1
    assert t31[5] == 37
    assert tables["EX4.2"].rows[-1] == TableRow("EX4.2", 79276, 3141281384, "divides_pm_pn")


def test_checksum_mismatch(tmp_path):
    path = tmp_path / "tables.json"
    path.write_text("{}")
    with pytest.raises(ConfigurationError):
        verify_checksum(path)


def test_select_tables():
    assert [t.table_id for t in select_tables(["T4.1", "T3.1"])] == ["T3.1", "T4.1"]
    with pytest.raises(ConfigurationError):
        select_tables(["T9.9"])


def test_cost_classes():
    assert cost_class(10 ** 6) == "quick"
    assert cost_class(10 ** 9) == "standard"
    assert cost_class(10 ** 12) == "extended"
    assert estimate_workload("T3.2a", 12, 480865) == 480865
    assert estimate_workload("T3.3", 15, 636787) == 15 * 636787

    tables = load_tables()
    t33 = {row.m: row.cost_class for row in tables["T3.3"].rows}
    assert t33[16] == "quick"
    assert [m for m, c in t33.items() if c != "quick"] == [17, 18, 21]
    t31 = {row.m: row.cost_class for row in tables["T3.1"].rows}
    assert t31[16] == "quick"
    assert t31[17] == "standard"
    assert {row.m: row.cost_class for row in tables["EX4.2"].rows}[79276] == "extended"


def test_run_reproduction_with_stub_table(sieve, monkeypatch):
    rows = [TableRow("T3.4", 4, 5), TableRow("T3.4", 8, 25), TableRow("T3.4", 9, 44),
            TableRow("T3.4", 50, 10 ** 9)]
    monkeypatch.setattr(reproduction, "select_tables", lambda _filter: [PublishedTable("T3.4", "stub", rows)])
    report = run_reproduction("quick", ["T3.4"], sieve=sieve, threads=2)
    assert [(e.m, e.status) for e in report.entries] == [(4, "pass"), (8, "pass"), (9, "fail"), (50, "skipped")]
    assert report.entries[2].computed == 45
    assert report.summary == {'pass': 2, 'fail': 1, 'skipped': 1}
    assert report.exit_code == 1


def test_unknown_tier(sieve):
    with pytest.raises(ConfigurationError):
        run_reproduction("heroic", sieve=sieve)


def test_emit_formats():
    report = ReproductionReport("quick", [
        ReportEntry("T3.1", 5, 37, 37, "pass", 0.25),
        ReportEntry("T3.1", 17, 1622840, reason="cost class standard above tier quick"),
    ])
    document = json.loads(emit(report, "json"))
    assert document['summary'] == {'pass': 1, 'fail': 0, 'skipped': 1}
    assert document['entries'][1]['computed'] is None

    csv = emit(report, "csv").splitlines()
    assert csv[0] == "table_id,m,expected,computed,status,elapsed,reason"
    assert csv[1] == "T3.1,5,37,37,pass,0.25,"
    assert csv[2].startswith("T3.1,17,1622840,,skipped,")

    text = emit(report, "text")
    assert text.endswith("pass: 1  fail: 0  skipped: 1\n")

    with pytest.raises(ConfigurationError):
        emit(report, "xml")


def test_emit_empty_report():
    assert emit(ReproductionReport(), "json") == '{"entries":[],"summary":{"pass":0,"fail":0,"skipped":0}}'
    assert emit(ReproductionReport(), "text").startswith("(no entries)")


@pytest.mark.slow
def test_quick_tier_corollary_table(sieve):
    report = run_reproduction("quick", ["T3.3"], sieve=sieve, threads=2)
    assert report.summary == {'pass': 14, 'fail': 0, 'skipped': 3}
    assert [e.m for e in report.entries if e.status == "skipped"] == [17, 18, 21]


@pytest.mark.slow
def test_quick_tier_ratio_tables(sieve):
    report = run_reproduction("quick", ["T3.2a", "T3.2b"], sieve=sieve, threads=2)
    assert report.summary['fail'] == 0
    assert report.summary['pass'] > 0


def test_misprinted_row_keeps_published_value():
    row = {r.m: r for r in load_tables()["T4.1"].rows}[11]
    assert row.expected == 3001
    assert row.erratum == 30001
    assert row.reference == 30001
    assert row.payload()['expected'] == 30001
    assert row.workload == 11 * 30001
    assert {r.m: r for r in load_tables()["T4.1"].rows}[10].reference == 6473


def test_phi_table_through_misprinted_row(sieve, monkeypatch):
    table = load_tables()["T4.1"]
    rows = [row for row in table.rows if row.m <= 11]
    monkeypatch.setattr(reproduction, "select_tables",
                        lambda _filter: [PublishedTable("T4.1", table.source, rows)])
    report = run_reproduction("quick", ["T4.1"], sieve=sieve, threads=2)
    assert report.summary == {'pass': 11, 'fail': 0, 'skipped': 0}
    last = report.entries[-1]
    assert (last.m, last.expected, last.computed) == (11, 3001, 30001)
    assert last.reason.startswith("erratum: published 3001")
    assert all(e.reason is None for e in report.entries[:-1])


@pytest.mark.slow
def test_quick_tier_has_no_failures(sieve):
    report = run_reproduction("quick", sieve=sieve, threads=2)
    assert report.summary['fail'] == 0
    assert report.exit_code == 0


def test_sources_cite_published_tables():
    for table_id, table in load_tables().items():
        kind = "Example" if table_id.startswith("EX") else "Table"
        number = table_id.lstrip("TEX").rstrip("ab")
        assert table.source.startswith(f"{kind} {number}"), table_id
