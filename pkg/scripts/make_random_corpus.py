#!/usr/bin/env python3
"""Write a directory of random .alb instances, e.g. to try the benchmark harness."""

import argparse
from pathlib import Path

from sualbp.generate import GeneratorConfig, instance_stream
from sualbp.instance import save_instance


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", type=Path)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--n-min", type=int, default=5)
    ap.add_argument("--n-max", type=int, default=12)
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    cfg = GeneratorConfig(n_min=args.n_min, n_max=args.n_max)
    for inst in instance_stream(args.seed, args.count, cfg):
        save_instance(inst, args.out / f"{inst.name}.alb")
    print(f"wrote {args.count} instances to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
