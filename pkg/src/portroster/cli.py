"""Command-line front end for the rostering engine.

Subcommands: solve / check / explain on instance files, multi-day simulate
on a depot, raw answer-set solving on rule files, and a statistics export.
Exit codes distinguish degraded (3) and infeasible (4) outcomes from plain
success so shell scripts can branch on them.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .asp import (
    AspError,
    GroundBudgetError,
    ParseError,
    SolveBudgetError,
    UnsafeProgramError,
    enumerate_answer_sets,
    parse_program,
)
from .engine import (
    DEGRADED,
    FEASIBLE,
    INFEASIBLE,
    RESOURCE_LIMIT,
    SOLVE_MODES,
    InvalidInstanceError,
    assignment_from_document,
    check_team,
    explain_team,
    outcome_to_document,
    solve,
)
from .model import DocumentError, instance_from_document, iso_to_day
from .simulate import day_result_to_document, simulate_window
from .store import StoreError, export_statistics_csv, load_snapshot, save_snapshot

LOG = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_DEGRADED = 3
EXIT_INFEASIBLE = 4
EXIT_RESOURCE_LIMIT = 5

_STATUS_EXIT = {
    FEASIBLE: EXIT_OK,
    DEGRADED: EXIT_DEGRADED,
    INFEASIBLE: EXIT_INFEASIBLE,
    RESOURCE_LIMIT: EXIT_RESOURCE_LIMIT,
}


class CliError(Exception):
    """A bad invocation or unreadable input; maps to exit code 2."""


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as err:
        raise CliError("cannot read %s: %s" % (path, err))
    except ValueError as err:
        raise CliError("%s is not valid JSON: %s" % (path, err))


def _load_instance(path: str):
    return instance_from_document(_load_json(path), path)


def _load_team(path: str):
    doc = _load_json(path)
    if isinstance(doc, dict) and isinstance(doc.get("assignment"), dict):
        # a solve outcome document doubles as a team file
        doc = doc["assignment"]
    return assignment_from_document(doc, path)


def _write_json(path: str, document: dict) -> None:
    try:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(document, handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as err:
        raise CliError("cannot write %s: %s" % (path, err))


def _print_table(rows: list[tuple], headers: tuple) -> None:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(str(cell)))
    fmt = "  ".join("%%-%ds" % w for w in widths)
    print(fmt % headers)
    print(fmt % tuple("-" * w for w in widths))
    for row in rows:
        print(fmt % tuple(str(c) for c in row))


def cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    try:
        outcome = solve(instance, mode=args.mode, alternatives=args.alternatives)
    except InvalidInstanceError as err:
        for issue in err.issues:
            print("error: %s" % issue, file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        _write_json(args.out, outcome_to_document(outcome))
    print("status: %s (mode %s)" % (outcome.status, outcome.mode_used))
    if outcome.assignment is not None:
        rows = sorted(outcome.assignment.triples, key=lambda t: (t[1], t[2], t[0]))
        _print_table(rows, ("employee", "shift", "skill"))
    for waived in outcome.waived_preferences:
        print("waived: %s" % waived.message())
    for line in outcome.diagnostics:
        print("note: %s" % line)
    return _STATUS_EXIT[outcome.status]


def cmd_check(args) -> int:
    instance = _load_instance(args.instance)
    team = _load_team(args.team)
    ok = check_team(instance, team)
    print("consistent" if ok else "violated")
    return EXIT_OK if ok else EXIT_VIOLATED


def cmd_explain(args) -> int:
    instance = _load_instance(args.instance)
    team = _load_team(args.team)
    report = explain_team(instance, team)
    for violation in report.violations:
        print(violation.message())
    if report.consistent:
        print("consistent")
    return EXIT_OK if report.consistent else EXIT_VIOLATED


def cmd_simulate(args) -> int:
    try:
        snapshot = load_snapshot(args.depot)
    except (StoreError, DocumentError) as err:
        raise CliError(str(err))
    start = iso_to_day(args.start, "--start")
    result = simulate_window(
        snapshot, start, args.days, generator_seed=args.seed
    )
    for day in result.days:
        doc = day_result_to_document(day)
        extra = ""
        if day.outcome is not None and day.outcome.assignment is not None:
            extra = "%d assignments" % len(day.outcome.assignment.triples)
        if doc["overtimeAccrued"]:
            extra += "  overtime +%d" % doc["overtimeAccrued"]
        print("%s  %-14s %s" % (doc["date"], doc["status"].upper(), extra.strip()))
    stats = result.aggregate_stats()
    print()
    _print_table(
        [
            ("total overtime hours", stats["totalOvertimeHours"]),
            ("degraded days", stats["degradedDays"]),
            ("infeasible days", stats["infeasibleDays"]),
            ("max weekly hours", stats["maxWeeklyHours"]),
            ("min weekly hours", stats["minWeeklyHours"]),
        ],
        ("statistic", "value"),
    )
    if args.commit:
        try:
            save_snapshot(result.snapshot, args.depot)
        except StoreError as err:
            raise CliError(str(err))
        print("committed %d day(s) to %s" % (args.days, args.depot))
    return EXIT_OK


def cmd_asp(args) -> int:
    try:
        with open(args.program, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        raise CliError("cannot read %s: %s" % (args.program, err))
    try:
        program = parse_program(text)
        answers = enumerate_answer_sets(program, args.models)
    except ParseError as err:
        print("parse error: %s" % err, file=sys.stderr)
        return EXIT_USAGE
    except UnsafeProgramError as err:
        for violation in err.violations:
            print("safety error: %s" % violation, file=sys.stderr)
        return EXIT_USAGE
    except (SolveBudgetError, GroundBudgetError) as err:
        print("budget exhausted: %s" % err, file=sys.stderr)
        return EXIT_RESOURCE_LIMIT
    lines = sorted(
        "{%s}" % ", ".join(sorted(str(atom) for atom in answer))
        for answer in answers
    )
    for line in lines:
        print(line)
    return EXIT_OK if answers else EXIT_VIOLATED


def cmd_stats(args) -> int:
    try:
        snapshot = load_snapshot(args.depot)
    except (StoreError, DocumentError) as err:
        raise CliError(str(err))
    text = export_statistics_csv(snapshot)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as err:
            raise CliError("cannot write %s: %s" % (args.out, err))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="portroster", description="build and audit port shift rosters"
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="build a team for an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--mode", choices=SOLVE_MODES, default="auto")
    p.add_argument("--out", help="write the outcome document here")
    p.add_argument("--alternatives", type=int, default=1)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="verify a team against an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--team", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("explain", help="list every constraint a team violates")
    p.add_argument("--instance", required=True)
    p.add_argument("--team", required=True)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("simulate", help="roll a depot forward day by day")
    p.add_argument("--depot", required=True)
    p.add_argument("--start", required=True, help="first day, ISO date")
    p.add_argument("--days", type=int, default=1)
    p.add_argument("--commit", action="store_true")
    p.add_argument("--seed", type=int, help="generate plans for uncovered days")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("asp", help="solve a raw rule program")
    p.add_argument("--program", required=True)
    p.add_argument("--models", type=int, default=None)
    p.set_defaults(func=cmd_asp)

    p = sub.add_parser("stats", help="export per-employee counters as CSV")
    p.add_argument("--depot", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG)
    try:
        return args.func(args)
    except CliError as err:
        print("error: %s" % err, file=sys.stderr)
        return EXIT_USAGE
    except DocumentError as err:
        print("error: %s" % err, file=sys.stderr)
        return EXIT_USAGE
    except AspError as err:
        print("error: %s" % err, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
