#!/usr/bin/env python3
"""Compare the beam search against exhaustive enumeration on random small instances."""

import argparse
import time

from sualbp.generate import GeneratorConfig, instance_stream
from sualbp.oracle import brute_force
from sualbp.search import SolverConfig, solve

CONFIGS = {
    "default": SolverConfig(),
    "no-bounds": SolverConfig(dual_bounds=False),
    "no-dominance": SolverConfig(dominance=False),
    "local-improve": SolverConfig(local_improve=True),
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--no-repair", action="store_true", help="keep setup matrices that break the triangle inequality")
    args = ap.parse_args()

    gen = GeneratorConfig(n_max=args.n_max, repair_triangles=not args.no_repair)
    start = time.perf_counter()
    mismatches = runs = 0
    for inst in instance_stream(args.seed, args.count, gen):
        for kind in (1, 2):
            opt = brute_force(inst, kind).objective
            for name, cfg in CONFIGS.items():
                if kind == 1 and name == "local-improve":
                    continue
                res = solve(inst, kind, cfg)
                runs += 1
                if res.objective != opt or res.status not in ("optimal", "infeasible"):
                    mismatches += 1
                    print(f"MISMATCH {inst.name} type-{kind} {name}: {res.status} {res.objective} vs {opt}")
    print(f"{runs} runs, {mismatches} mismatches, {time.perf_counter() - start:.1f}s")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
