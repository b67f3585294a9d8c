"""Command line entry point: ``sualbp solve1|solve2|bench|validate``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bench import BenchConfig, default_time_limit, run_benchmark, summarize
from .instance import InstanceError, Rounding, derive_station_count, load_instance, validate_instance
from .preprocess import InfeasibleInstance, derive
from .search import FEASIBLE, INFEASIBLE, NO_SOLUTION, OPTIMAL, SolverConfig, solve

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_NO_SOLUTION = 4

_ROUNDING = {"floor": Rounding.FLOOR, "half": Rounding.HALF, "ceil": Rounding.CEIL}


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", type=Path)
    p.add_argument("--time-limit", type=float, default=None, help="seconds (default: $SUALBP_TIME_LIMIT or none)")
    p.add_argument("--no-dual-bounds", action="store_true")
    p.add_argument("--no-dominance", action="store_true")
    p.add_argument("--json", action="store_true", help="print the result as JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sualbp", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    s1 = sub.add_parser("solve1", help="minimize the number of stations for a cycle time")
    _solver_flags(s1)
    s1.add_argument("--c", type=int, default=None, help="override the cycle time")

    s2 = sub.add_parser("solve2", help="minimize the cycle time for a number of stations")
    _solver_flags(s2)
    g = s2.add_mutually_exclusive_group()
    g.add_argument("--m", type=int, default=None, help="number of stations")
    g.add_argument("--round", choices=sorted(_ROUNDING), default=None,
                   help="derive m from sum(t)/c with this rounding (default ceil)")
    s2.add_argument("--local-improve", action="store_true")

    b = sub.add_parser("bench", help="run a batch and write result tables")
    b.add_argument("paths", nargs="+", help="directories, instance files, or .txt lists")
    b.add_argument("--type", type=int, choices=(1, 2), required=True)
    b.add_argument("--out", type=Path, required=True)
    b.add_argument("--time-limit", type=float, default=None)
    b.add_argument("--round", choices=sorted(_ROUNDING), default="ceil")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--local-improve", action="store_true")
    b.add_argument("--no-dual-bounds", action="store_true")
    b.add_argument("--no-dominance", action="store_true")

    v = sub.add_parser("validate", help="check an instance and print derived data")
    v.add_argument("file", type=Path)
    v.add_argument("--type", type=int, choices=(1, 2), default=None)
    v.add_argument("--oracle", action="store_true", help="also solve exhaustively (n <= 10)")
    v.add_argument("--round", choices=sorted(_ROUNDING), default="ceil")
    return parser


def _time_limit(arg):
    if arg is not None:
        return arg
    return default_time_limit(0) or None


def _status_code(status: str) -> int:
    return {OPTIMAL: EXIT_OK, FEASIBLE: EXIT_OK, INFEASIBLE: EXIT_INFEASIBLE, NO_SOLUTION: EXIT_NO_SOLUTION}[status]


def _report(inst, res, args, extra=None) -> None:
    payload = {
        "instance": inst.name,
        "status": res.status,
        "objective": res.objective,
        "lower_bound": res.lower_bound,
        "elapsed_s": round(res.elapsed, 4),
        "stations": res.best.one_based() if res.best else None,
        "station_times": list(res.best.station_times) if res.best else None,
        "stats": vars(res.stats),
        **(extra or {}),
    }
    if args.json:
        print(json.dumps(payload))
        return
    print(f"instance   {inst.name}")
    for k, v in (extra or {}).items():
        print(f"{k:<10} {v}")
    print(f"status     {res.status}")
    print(f"objective  {res.objective}")
    print(f"bound      {res.lower_bound}")
    print(f"time       {res.elapsed:.3f}s")
    if res.best:
        for k, (seq, st) in enumerate(zip(res.best.one_based(), res.best.station_times), 1):
            print(f"  station {k}: {seq} time {st}")
    s = res.stats
    print(f"expanded {s.expanded} generated {s.generated} pruned(bound) {s.pruned_by_bound} "
          f"pruned(dominance) {s.pruned_by_dominance} duplicates {s.pruned_duplicate} iterations {s.iterations}")
    if s.li_calls:
        print(f"local improvement: {s.li_improved}/{s.li_calls} incumbents improved")


def _cmd_solve(args, problem_type: int) -> int:
    inst = load_instance(args.file)
    extra = {}
    if problem_type == 1:
        if args.c is not None:
            inst = inst.with_cycle_time(args.c)
        extra["c"] = inst.cycle_time
    else:
        if args.m is not None:
            inst = inst.with_station_count(args.m)
        elif args.round is not None or inst.station_count is None:
            inst = inst.with_station_count(derive_station_count(inst, _ROUNDING[args.round or "ceil"]))
        extra["m"] = inst.station_count
    diag = validate_instance(inst, problem_type)
    for w in diag.warnings[:5]:
        logging.warning(w)
    cfg = SolverConfig(
        time_limit=_time_limit(args.time_limit),
        dual_bounds=not args.no_dual_bounds,
        dominance=not args.no_dominance,
        local_improve=getattr(args, "local_improve", False),
    )
    res = solve(inst, problem_type, cfg)
    _report(inst, res, args, extra)
    return _status_code(res.status)


def _cmd_bench(args) -> int:
    cfg = BenchConfig(
        problem_type=args.type,
        time_limit=_time_limit(args.time_limit) or 60.0,
        rounding=_ROUNDING[args.round],
        workers=args.workers,
        solver=SolverConfig(
            dual_bounds=not args.no_dual_bounds,
            dominance=not args.no_dominance,
            local_improve=args.local_improve,
        ),
    )
    rows = run_benchmark(args.paths, cfg, args.out)
    for s in summarize(rows):
        print("  ".join(f"{k}={v}" for k, v in s.items()))
    print(f"{len(rows)} instances; results in {args.out}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    from .oracle import brute_force

    inst = load_instance(args.file)
    if args.type == 2 and inst.station_count is None:
        inst = inst.with_station_count(derive_station_count(inst, _ROUNDING[args.round]))
    diag = validate_instance(inst, args.type)
    print(f"instance {inst.name}: n={inst.n} c={inst.cycle_time} m={inst.station_count} alpha={inst.alpha}")
    for e in diag.errors:
        print(f"error: {e}")
    for w in diag.warnings:
        print(f"warning: {w}")
    if diag.errors:
        return EXIT_INPUT
    kinds = [args.type] if args.type else [k for k, ok in ((1, inst.cycle_time), (2, inst.station_count)) if ok]
    for kind in kinds:
        try:
            pre = derive(inst, kind)
        except InfeasibleInstance as exc:
            print(f"type-{kind}: infeasible ({exc})")
            continue
        print(f"type-{kind}: m in [{pre.m_lower}, {pre.m_upper}], c in [{pre.c_lower}, {pre.c_upper}]")
        print(f"  windows E={list(pre.earliest_station)} L={list(pre.latest_station)}")
        print(f"  min setups fwd={list(pre.min_fwd_setup)} bwd={list(pre.min_bwd_setup)}")
        if args.oracle:
            res = brute_force(inst, kind)
            print(f"  oracle objective: {res.objective}")
            if res.solution:
                print(f"  oracle stations: {res.solution.one_based()}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "solve1":
            return _cmd_solve(args, 1)
        if args.command == "solve2":
            return _cmd_solve(args, 2)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_validate(args)
    except (InstanceError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
