import argparse
import logging

from ..numtheory.practicals import PracticalScanner
from ..numtheory.search import search_by_name
from ..numtheory.sfunction import compute_S
from ..numtheory.verification import SUITES, run_suite
from ..report.reproduction import emit, run_reproduction
from ..report.tables import TABLE_ORDER, TIERS

logger = logging.getLogger("cli")

SEARCHES = ["ratio", "s", "f", "phi", "tau", "divisor", "conj41"]


def non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {value}")
    return value


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def register_commands(subparsers):
    """Attach every subcommand; each parser carries its handler."""
    pi = subparsers.add_parser("pi", help="count primes up to x")
    pi.add_argument("x", type=non_negative_int)
    pi.set_defaults(handler=cmd_pi)

    nth = subparsers.add_parser("nth-prime", help="the k-th prime")
    nth.add_argument("k", type=positive_int)
    nth.set_defaults(handler=cmd_nth_prime)

    s = subparsers.add_parser("s", help="S(m) = max{km - p_k}")
    s.add_argument("m", type=positive_int)
    s.add_argument("--no-early-termination", action="store_true", dest="no_early_termination")
    s.set_defaults(handler=cmd_s)

    t = subparsers.add_parser("t", help="T(m) = max{km - q_k} over practical numbers")
    t.add_argument("m", type=positive_int)
    t.set_defaults(handler=cmd_t)

    search = subparsers.add_parser("search", help="least witness of a prime-counting equation")
    search.add_argument("predicate", choices=SEARCHES)
    search.add_argument("--m", type=positive_int, required=True)
    search.add_argument("--a", type=int)
    search.add_argument("--variant")
    search.add_argument("--n-limit", type=positive_int, dest="n_limit")
    search.set_defaults(handler=cmd_search)

    reproduce = subparsers.add_parser("reproduce", help="recompute the published tables")
    reproduce.add_argument("--table", action="append", dest="tables", metavar="TABLE_ID",
                           help=f"restrict to a table ({', '.join(TABLE_ORDER)}); repeatable")
    reproduce.add_argument("--tier", choices=TIERS, dest="reproduce_tier", help="reproduction tier for this run")
    reproduce.set_defaults(handler=cmd_reproduce)

    verify = subparsers.add_parser("verify", help="run a bounded verification suite")
    verify.add_argument("suite", choices=list(SUITES))
    verify.add_argument("--limit", type=positive_int, help="override the suite's main limit")
    verify.set_defaults(handler=cmd_verify)

    practical = subparsers.add_parser("practical", help="practical numbers")
    actions = practical.add_subparsers(dest="action")
    actions.required = True
    count = actions.add_parser("count", help="P(x)")
    count.add_argument("x", type=positive_int)
    count.set_defaults(handler=cmd_practical_count)
    kth = actions.add_parser("kth", help="the k-th practical number")
    kth.add_argument("k", type=positive_int)
    kth.set_defaults(handler=cmd_practical_kth)
    export = actions.add_parser("export", help="write (k, q_k) as CSV")
    export.add_argument("path")
    export.add_argument("--k-max", type=positive_int, dest="k_max", required=True)
    export.set_defaults(handler=cmd_practical_export)


def cmd_pi(app, args) -> int:
    value = app.sieve.pi(args.x)
    app.emit({'x': args.x, 'pi': value}, str(value))
    return 0


def cmd_nth_prime(app, args) -> int:
    index = app.sieve.prime_index(args.k)
    app.emit({'k': index.k, 'p_k': index.p_k}, str(index.p_k))
    return 0


def cmd_s(app, args) -> int:
    result = compute_S(args.m, app.sieve, early_termination=not args.no_early_termination)
    app.emit(result.to_record(), str(result.s_value))
    return 0


def cmd_t(app, args) -> int:
    result = _scanner(app).compute_T(args.m)
    app.emit(result.to_record(), str(result.t_value))
    return 0


def cmd_search(app, args) -> int:
    outcomes = search_by_name(args.predicate, args.m, app.sieve, a=args.a, variant=args.variant,
                              n_limit=args.n_limit)
    lines = []
    for outcome in outcomes:
        if outcome.found:
            lines.append(str(outcome.witness_n))
        else:
            lines.append(f"none up to {outcome.scanned_up_to}")
        if outcome.counterexample_candidate:
            logger.warning(f"m={args.m}: counterexample candidate, confirm with an extended search")
    records = [outcome.to_record() for outcome in outcomes]
    app.emit(records[0] if len(records) == 1 else records, "\n".join(lines))
    return 0


def cmd_reproduce(app, args) -> int:
    tier = args.reproduce_tier or app.config.tier
    report = run_reproduction(tier, args.tables, threads=app.config.threads,
                              settings=app.config.settings)
    app.emit_raw(emit(report, app.config.output_format))
    return report.exit_code


def cmd_verify(app, args) -> int:
    result = run_suite(args.suite, app.sieve, limit=args.limit)
    status = "passed" if result.passed else "FAILED"
    text = f"{result.suite}: {status} ({result.checked} checks, {result.violation_count} violations)"
    for violation in result.violations:
        text += f"\n  {violation}"
    app.emit(result.to_dict(), text)
    return 0 if result.passed else 1


def _scanner(app) -> PracticalScanner:
    return PracticalScanner(practical_config=app.config.settings.practical)


def cmd_practical_count(app, args) -> int:
    value = _scanner(app).practical_count(args.x)
    app.emit({'x': args.x, 'count': value}, str(value))
    return 0


def cmd_practical_kth(app, args) -> int:
    value = _scanner(app).kth_practical(args.k)
    app.emit({'k': args.k, 'q_k': value}, str(value))
    return 0


def cmd_practical_export(app, args) -> int:
    path = _scanner(app).export_practicals(args.path, args.k_max)
    app.emit({'path': str(path), 'k_max': args.k_max}, str(path))
    return 0
