"""Batch runs over instance files with result tables, traces and curve data."""

from __future__ import annotations

import csv
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .fixtures import reference_objective, size_class
from .instance import Instance, Rounding, derive_station_count, load_instance
from .metrics import IncumbentTrace, primal_gap, primal_integral
from .search import INFEASIBLE, OPTIMAL, SolverConfig, solve

log = logging.getLogger(__name__)

ROW_FIELDS = [
    "instance", "cls", "alpha", "n", "param", "status", "objective", "bound",
    "gap_pct", "runtime_s", "primal_integral", "expanded", "li_calls", "li_improved", "error",
]
TIMING_FIELDS = ("runtime_s", "primal_integral")


@dataclass
class BenchConfig:
    problem_type: int = 2
    time_limit: float = 60.0
    rounding: Rounding = Rounding.CEIL
    workers: int = 1
    solver: SolverConfig = field(default_factory=SolverConfig)


@dataclass
class BenchRow:
    instance: str
    cls: str
    alpha: Optional[float]
    n: int
    param: Optional[int]  # station count (type-2) or cycle time (type-1)
    status: str
    objective: Optional[int]
    bound: Optional[int]
    gap_pct: Optional[float]
    runtime_s: float
    primal_integral: Optional[float]
    expanded: int = 0
    li_calls: int = 0
    li_improved: int = 0
    error: str = ""
    trace: list = field(default_factory=list, repr=False)


def default_time_limit(fallback: float = 60.0) -> float:
    raw = os.environ.get("SUALBP_TIME_LIMIT")
    return float(raw) if raw else fallback


def collect_instances(paths: Iterable[str | Path]) -> list[Path]:
    """Expand directories (recursively, .alb and .json) and list files."""
    out: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(q for q in p.rglob("*") if q.suffix.lower() in (".alb", ".json")))
        elif p.suffix.lower() == ".txt":
            out.extend(Path(line.strip()) for line in p.read_text().splitlines() if line.strip())
        else:
            out.append(p)
    return out


def prepare(inst: Instance, problem_type: int, rounding: Rounding) -> Instance:
    if problem_type == 2 and inst.station_count is None:
        return inst.with_station_count(derive_station_count(inst, rounding))
    return inst


def run_one(path: Path, cfg: BenchConfig) -> BenchRow:
    name = path.stem
    try:
        inst = prepare(load_instance(path), cfg.problem_type, cfg.rounding)
    except Exception as exc:  # per-instance failures land in the row
        return BenchRow(name, "?", None, 0, None, "error", None, None, None, 0.0, None, error=str(exc))
    param = inst.station_count if cfg.problem_type == 2 else inst.cycle_time
    solver = SolverConfig(**{**asdict(cfg.solver), "time_limit": cfg.time_limit})
    try:
        res = solve(inst, cfg.problem_type, solver)
    except Exception as exc:
        return BenchRow(name, size_class(inst.n), inst.alpha, inst.n, param, "error", None, None, None, 0.0, None,
                        error=str(exc))
    ref = reference_objective(name, inst.alpha)
    if res.status == OPTIMAL:
        ref = res.objective
    gap = None
    if res.best is not None and res.status != INFEASIBLE:
        gap = 0.0 if res.status == OPTIMAL else 100.0 * (res.objective - res.lower_bound) / res.objective
    horizon = max(cfg.time_limit, res.elapsed)
    trace = IncumbentTrace.from_pairs(
        res.trace, horizon, ref, infeasible_at=res.elapsed if res.status == INFEASIBLE else None
    )
    return BenchRow(
        name, size_class(inst.n), inst.alpha, inst.n, param, res.status, res.objective,
        res.lower_bound if res.status != INFEASIBLE else None, gap, round(res.elapsed, 4),
        round(float(primal_integral(trace)), 4), res.stats.expanded, res.stats.li_calls,
        res.stats.li_improved, trace=list(res.trace),
    )


def run_benchmark(paths: Sequence[str | Path], cfg: BenchConfig, out_dir: str | Path | None = None) -> list[BenchRow]:
    files = collect_instances(paths)
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            rows = list(pool.map(lambda p: run_one(p, cfg), files))
    else:
        rows = [run_one(p, cfg) for p in files]
    if out_dir is not None:
        write_outputs(rows, cfg, Path(out_dir))
    return rows


def summarize(rows: Sequence[BenchRow]) -> list[dict]:
    """Per (class, alpha): count, mean gap %, mean time, feasible and optimal counts."""
    groups: dict[tuple[str, Optional[float]], list[BenchRow]] = {}
    for r in rows:
        groups.setdefault((r.cls, r.alpha), []).append(r)
    out = []
    for (cls, alpha), rs in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1] or 0.0)):
        gaps = [r.gap_pct if r.gap_pct is not None else 100.0 for r in rs if r.status != INFEASIBLE]
        out.append({
            "Class": cls,
            "alpha": "" if alpha is None else f"{alpha:.2f}",
            "#": len(rs),
            "Gap": f"{sum(gaps) / len(gaps):.2f}" if gaps else "",
            "Time": f"{sum(r.runtime_s for r in rs) / len(rs):.4f}",
            "Feas": sum(r.objective is not None for r in rs),
            "Opt": sum(r.status == OPTIMAL for r in rs),
        })
    return out


def solved_over_time(rows: Sequence[BenchRow]) -> list[tuple[float, float]]:
    """Step points (seconds, fraction of instances proven optimal by then)."""
    if not rows:
        return []
    times = sorted(r.runtime_s for r in rows if r.status == OPTIMAL)
    return [(t, (k + 1) / len(rows)) for k, t in enumerate(times)]


def integral_profile(rows: Sequence[BenchRow]) -> list[tuple[float, float]]:
    """Step points (primal integral, fraction of instances at or below it)."""
    vals = sorted(r.primal_integral for r in rows if r.primal_integral is not None)
    return [(v, (k + 1) / len(rows)) for k, v in enumerate(vals)]


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_outputs(rows: Sequence[BenchRow], cfg: BenchConfig, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "traces").mkdir(exist_ok=True)
    _write_csv(out / "results.csv", ROW_FIELDS, ([_fmt(getattr(r, f)) for f in ROW_FIELDS] for r in rows))
    for r in rows:
        _write_csv(out / "traces" / f"{r.instance}.csv", ["seconds", "objective"],
                   ((f"{t:.4f}", obj) for t, obj in r.trace))
    summary = summarize(rows)
    keys = ["Class", "alpha", "#", "Gap", "Time", "Feas", "Opt"]
    _write_csv(out / "summary.csv", keys, ([s[k] for k in keys] for s in summary))
    _write_csv(out / "solved_over_time.csv", ["seconds", "fraction_solved"], solved_over_time(rows))
    _write_csv(out / "primal_integral_profile.csv", ["primal_integral", "fraction"], integral_profile(rows))


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.4f}"
    if isinstance(v, Fraction):
        return f"{float(v):.4f}"
    return str(v)
