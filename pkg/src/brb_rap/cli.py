"""Command-line front end.

Exit codes: 0 success, 1 infeasible or regression failure, 2 usage or
parse error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from typing import Sequence

from . import benchmark
from .enumeration import iter_forward_bat, iter_upper_bound_bat
from .errors import InstanceError, ResourceLimitError, SolutionParseError
from .model import (
    format_scientific,
    is_feasible,
    load_instance,
    parse_solution_string,
    space_size_component_based,
    space_size_number_based,
)
from .solver import SolverOptions, reconstruct, report_to_dict, solve, write_stats_csv

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _parse_ids(text: str) -> list[int]:
    ids: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                lo, hi = (int(v) for v in part.split("-", 1))
                ids.extend(range(lo, hi + 1))
            else:
                ids.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad id list {text!r}") from None
    bad = [i for i in ids if i not in benchmark.IDS]
    if bad or not ids:
        raise argparse.ArgumentTypeError(f"ids must be in 1..33, got {text!r}")
    return ids


def _load(path: str):
    try:
        return load_instance(path)
    except (OSError, InstanceError) as exc:
        print(f"error: cannot load instance: {exc}", file=sys.stderr)
        return None


def cmd_solve(args) -> int:
    instance = _load(args.instance)
    if instance is None:
        return EXIT_USAGE
    options = SolverOptions(
        use_rlb=not args.no_rlb,
        use_dominance=not args.no_dominance,
        use_dynamic_bounds=not args.no_bounds,
        collect_stats=True,
        max_items=args.max_items,
    )
    try:
        report = solve(instance, options)
    except ResourceLimitError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    if args.stats:
        write_stats_csv(report, args.stats)
    if args.json:
        print(json.dumps(report_to_dict(report), indent=2))
    elif report.optimum is None:
        if report.outcome == "below_rlb":
            print(f"infeasible: no solution at or above reliability_lb={report.reliability_lb}")
        else:
            print("infeasible")
    else:
        agg = report.optimal_aggregates
        print(f"R={agg.reliability:.11f} W={agg.weight} C={agg.cost}")
        print(f"solution: {reconstruct(report)}")
        print(f"time: {report.wall_time:.3f}s")
    return EXIT_OK if report.optimum is not None else EXIT_FAIL


def cmd_bench(args) -> int:
    options = SolverOptions(use_rlb=not args.no_rlb)
    results = benchmark.run_regression(
        args.ids,
        options,
        tolerance=args.tolerance,
        float32_components=args.float32_components,
        workers=args.workers,
    )
    print(f"{'id':>3} {'R':>13} {'W':>4} {'C':>4} {'dR':>9} {'time':>7}  result")
    for r in results:
        if r.error:
            print(f"{r.id:>3} {'-':>13} {'-':>4} {'-':>4} {'-':>9} {r.wall_time:>6.2f}s  FAIL ({r.error})")
            continue
        notes = [n for n, ok in (("W", r.weight_ok), ("C", r.cost_ok)) if not ok]
        verdict = "pass" if r.passed else "FAIL" + (f" ({','.join(notes)} mismatch)" if notes else "")
        print(
            f"{r.id:>3} {r.reliability:.11f} {r.weight:>4} {r.cost:>4} "
            f"{r.reliability_error:>+9.1e} {r.wall_time:>6.2f}s  {verdict}"
        )
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} pass")
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(
                ["id", "passed", "reliability", "weight", "cost", "reliability_error",
                 "wall_time", "solution", "same_solution", "error"]
            )
            for r in results:
                writer.writerow(
                    [r.id, int(r.passed), "" if r.reliability is None else repr(r.reliability),
                     r.weight, r.cost, "" if r.reliability_error is None else repr(r.reliability_error),
                     f"{r.wall_time:.4f}", r.solution or "", int(r.same_solution), r.error or ""]
                )
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def cmd_verify(args) -> int:
    instance = _load(args.instance)
    if instance is None:
        return EXIT_USAGE
    try:
        solution = parse_solution_string(args.solution, instance)
    except SolutionParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    agg = solution.aggregates
    verdict = is_feasible(solution, instance)
    print(f"R={agg.reliability:.11f} W={agg.weight} C={agg.cost}")
    print(f"weight: {agg.weight} <= {instance.weight_ceiling} {'ok' if 'weight' not in verdict.violations else 'VIOLATED'}")
    print(f"cost: {agg.cost} <= {instance.cost_ceiling} {'ok' if 'cost' not in verdict.violations else 'VIOLATED'}")
    subsystem_violations = [v for v in verdict.violations if v not in ("weight", "cost")]
    print(f"counts: {'ok' if not subsystem_violations else 'VIOLATED ' + ' '.join(subsystem_violations)}")
    if verdict.feasible:
        print("feasible")
        return EXIT_OK
    print(f"infeasible({','.join(verdict.violations)})")
    return EXIT_FAIL


def cmd_enumerate(args) -> int:
    kind = args.kind
    if kind == "auto":
        kind = "forward" if args.cap == 2 else "upper-bound"
    vectors = iter_forward_bat(args.mu) if kind == "forward" else iter_upper_bound_bat(args.mu, args.cap)
    out = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([f"x{j}" for j in range(1, args.mu + 1)] + ["sum"])
        for x in vectors:
            writer.writerow([*x, sum(x)])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_space(args) -> int:
    instance = _load(args.instance)
    if instance is None:
        return EXIT_USAGE
    component = space_size_component_based(instance)
    number = space_size_number_based(instance)
    print(f"component-based: {format_scientific(component)} ({component})")
    print(f"number-based: {format_scientific(number)} ({number})")
    return EXIT_OK


def _positive(lo: int):
    def parse(text: str) -> int:
        value = int(text)
        if value < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {value}")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brb-rap", description="Exact solver for series-parallel redundancy allocation."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log per-stage progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--no-rlb", action="store_true", help="ignore the instance's reliability_lb")
    p.add_argument("--no-dominance", action="store_true")
    p.add_argument("--no-bounds", action="store_true", help="disable suffix-minimum bounds")
    p.add_argument("--stats", metavar="PATH", help="write per-stage counts as CSV")
    p.add_argument("--json", action="store_true", help="print the full report as JSON")
    p.add_argument("--max-items", type=_positive(1), default=SolverOptions.max_items)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run the Fyffe regression")
    p.add_argument("--ids", type=_parse_ids, default=list(benchmark.IDS),
                   help="comma list and ranges, e.g. 1,5-7 (default: all 33)")
    p.add_argument("--no-rlb", action="store_true")
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--workers", type=_positive(1), default=None,
                   help="parallel worker processes (default: logical cores)")
    p.add_argument("--tolerance", type=float, default=benchmark.RELIABILITY_TOLERANCE,
                   help="absolute reliability tolerance (default: %(default)g)")
    p.add_argument("--float32-components", action="store_true",
                   help="round component reliabilities to float32 before solving")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="evaluate a solution string")
    p.add_argument("instance")
    p.add_argument("solution", help='e.g. "0030 200 0002 ..."')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="dump a BAT enumeration as CSV")
    p.add_argument("--mu", type=_positive(1), required=True)
    p.add_argument("--cap", type=_positive(2), required=True)
    p.add_argument("--kind", choices=["auto", "forward", "upper-bound"], default="auto",
                   help="auto: binary forward BAT when cap is 2, upper-bound BAT otherwise")
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("space", help="print solution-space sizes")
    p.add_argument("instance")
    p.set_defaults(func=cmd_space)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if getattr(args, "workers", 1) is None:
        args.workers = os.cpu_count() or 1
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
