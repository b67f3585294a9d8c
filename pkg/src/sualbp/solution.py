"""Line solutions: per-station task sequences, decoding from transition paths,
and an independent feasibility check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .instance import Diagnostics, Instance
from .model import ASSIGN_FIRST, ASSIGN_NEXT, CLOSE_STATION, Transition
from .preprocess import station_time


class ConsistencyError(RuntimeError):
    """A decoded solution disagrees with the cost the search attributed to it."""


@dataclass(frozen=True)
class Solution:
    stations: tuple[tuple[int, ...], ...]
    station_times: tuple[int, ...]
    objective: int
    provenance: tuple[Transition, ...] | None = None

    @property
    def cycle_time(self) -> int:
        return max(self.station_times, default=0)

    def one_based(self) -> list[list[int]]:
        return [[i + 1 for i in seq] for seq in self.stations]


def objective_of(station_times: Sequence[int], problem_type: int) -> int:
    if problem_type == 1:
        return len(station_times)
    return max(station_times, default=0)


def make_solution(
    inst: Instance, stations: Sequence[Sequence[int]], problem_type: int, provenance=None
) -> Solution:
    stations = tuple(tuple(s) for s in stations if s)
    times = tuple(station_time(inst, s) for s in stations)
    if provenance is None:
        provenance = tuple(path_from_stations(inst, stations, problem_type))
    return Solution(stations, times, objective_of(times, problem_type), tuple(provenance))


def path_from_stations(inst: Instance, stations: Sequence[Sequence[int]], problem_type: int) -> list[Transition]:
    """The transition sequence that builds these stations in order."""
    t, tau, mu = inst.task_times, inst.fwd_setup, inst.bwd_setup
    path = []
    for seq in stations:
        used = t[seq[0]]
        path.append(Transition(ASSIGN_FIRST, seq[0], 1 if problem_type == 1 else used))
        for a, b in zip(seq, seq[1:]):
            used += tau[a][b] + t[b]
            path.append(Transition(ASSIGN_NEXT, b, 0 if problem_type == 1 else used))
        used += mu[seq[-1]][seq[0]]
        path.append(Transition(CLOSE_STATION, None, 0 if problem_type == 1 else used))
    return path


def stations_from_path(path: Sequence[Transition]) -> list[list[int]]:
    stations: list[list[int]] = []
    open_ = False
    for tr in path:
        if tr.kind == ASSIGN_FIRST:
            if open_:
                raise ConsistencyError("assign_first while a station is open")
            stations.append([tr.task])
            open_ = True
        elif tr.kind == ASSIGN_NEXT:
            if not open_:
                raise ConsistencyError("assign_next without an open station")
            stations[-1].append(tr.task)
        elif tr.kind == CLOSE_STATION:
            if not open_:
                raise ConsistencyError("close_station without an open station")
            open_ = False
        else:
            raise ConsistencyError(f"unknown transition {tr.kind!r}")
    if open_:
        raise ConsistencyError("path ends with an open station")
    return stations


def solution_from_path(inst: Instance, path: Sequence[Transition], problem_type: int) -> Solution:
    return make_solution(inst, stations_from_path(path), problem_type, provenance=tuple(path))


def validate_solution(inst: Instance, sol: Solution, problem_type: int) -> Diagnostics:
    """Partition, precedence, station-time formula, and the type-specific limit."""
    diag = Diagnostics()
    n = inst.n
    seen: dict[int, tuple[int, int]] = {}
    for k, seq in enumerate(sol.stations):
        if not seq:
            diag.errors.append(f"station {k + 1} is empty")
        for pos, i in enumerate(seq):
            if not 0 <= i < n:
                diag.errors.append(f"unknown task {i + 1} on station {k + 1}")
                continue
            if i in seen:
                diag.errors.append(f"task {i + 1} assigned more than once")
            seen[i] = (k, pos)
    missing = sorted(set(range(n)) - set(seen))
    if missing:
        diag.errors.append(f"tasks not assigned: {[i + 1 for i in missing]}")
    for i, j in inst.precedence:
        if i in seen and j in seen and seen[i] >= seen[j]:
            ki, kj = seen[i][0], seen[j][0]
            where = "within station" if ki == kj else "across stations"
            diag.errors.append(f"precedence ({i + 1},{j + 1}) violated {where}")
    if len(sol.station_times) != len(sol.stations):
        diag.errors.append("station_times length differs from station count")
    else:
        for k, seq in enumerate(sol.stations):
            if seq and all(0 <= i < n for i in seq):
                actual = station_time(inst, seq)
                if actual != sol.station_times[k]:
                    diag.errors.append(f"station {k + 1} time {sol.station_times[k]} but recomputed {actual}")
    times = [station_time(inst, s) for s in sol.stations if s and all(0 <= i < n for i in s)]
    if problem_type == 1:
        c = inst.cycle_time
        for k, st in enumerate(times):
            if c is not None and st > c:
                diag.errors.append(f"station {k + 1} time {st} exceeds cycle time {c}")
    else:
        m = inst.station_count
        if m is not None and len(sol.stations) > m:
            diag.errors.append(f"{len(sol.stations)} stations exceed the limit {m}")
    recomputed = objective_of(times, problem_type)
    if recomputed != sol.objective:
        diag.errors.append(f"objective {sol.objective} but recomputed {recomputed}")
    return diag
