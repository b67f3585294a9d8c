"""Exhaustive reference solvers for tiny instances.

Nothing here shares logic with the search models beyond the station-time
formula: there are no bounds, windows, dominance or close restrictions. Any
precedence-feasible order with any placement of station breaks is tried.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Optional

from .instance import Instance
from .preprocess import station_time, transitive_closure
from .solution import Solution, make_solution

MAX_ORACLE_TASKS = 10
INF = math.inf


class OracleRefused(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    objective: Optional[int]  # None means infeasible
    solution: Optional[Solution]

    @property
    def feasible(self) -> bool:
        return self.objective is not None


def _guard(inst: Instance) -> None:
    if inst.n > MAX_ORACLE_TASKS:
        raise OracleRefused(f"oracle refuses n={inst.n} > {MAX_ORACLE_TASKS}")


class _Enumerator:
    """Memoized recursion over (unscheduled, prev, first, used time[, stations])."""

    def __init__(self, inst: Instance, problem_type: int):
        self.inst = inst
        self.kind = problem_type
        n = inst.n
        self.pred = [0] * n
        for i, j in inst.precedence:
            self.pred[j] |= 1 << i
        self.t, self.tau, self.mu = inst.task_times, inst.fwd_setup, inst.bwd_setup
        if problem_type == 1:
            if inst.cycle_time is None:
                raise ValueError("type-1 oracle needs a cycle time")
            self.c = inst.cycle_time
        else:
            if inst.station_count is None:
                raise ValueError("type-2 oracle needs a station count")
            self.m = inst.station_count
        self.best1 = lru_cache(maxsize=None)(self._best1)
        self.best2 = lru_cache(maxsize=None)(self._best2)

    def ready(self, U: int):
        return [i for i in range(self.inst.n) if U >> i & 1 and not U & self.pred[i]]

    # type-1: fewest stations still to open; the open station (if any) is free
    def _best1(self, U: int, p, f, used: int):
        t, tau, mu, c = self.t, self.tau, self.mu, self.c
        if f is None:
            if not U:
                return 0
            vals = [1 + self.best1(U & ~(1 << i), i, i, t[i]) for i in self.ready(U) if t[i] <= c]
            return min(vals, default=INF)
        best = INF
        if used + mu[p][f] <= c:
            best = self.best1(U, None, None, 0)
        for i in self.ready(U):
            nxt = used + tau[p][i] + t[i]
            if nxt <= c:
                best = min(best, self.best1(U & ~(1 << i), i, f, nxt))
        return best

    # type-2: smallest max station time over the open station and all later ones
    def _best2(self, U: int, p, f, used: int, k: int):
        t, tau, mu = self.t, self.tau, self.mu
        if f is None:
            if not U:
                return 0
            if k >= self.m:
                return INF
            return min(self.best2(U & ~(1 << i), i, i, t[i], k + 1) for i in self.ready(U))
        best = max(used + mu[p][f], self.best2(U, None, None, 0, k))
        for i in self.ready(U):
            best = min(best, self.best2(U & ~(1 << i), i, f, used + tau[p][i] + t[i], k))
        return best

    def value(self, U, p, f, used, k):
        if self.kind == 1:
            return self.best1(U, p, f, used)
        return self.best2(U, p, f, used, k)

    def walk(self, U, p, f, used, k) -> list[list[int]]:
        """Follow optimal choices from a state and return the stations it builds."""
        target = self.value(U, p, f, used, k)
        stations: list[list[int]] = [] if f is None else [[]]
        t, tau, mu = self.t, self.tau, self.mu
        acc = 0 if self.kind == 1 else -INF  # type-2: max over closed stations so far
        while U or f is not None:
            if f is None:
                for i in self.ready(U):
                    if self.kind == 1:
                        ok = t[i] <= self.c and 1 + self.best1(U & ~(1 << i), i, i, t[i]) == target - acc
                    else:
                        ok = k < self.m and max(acc, self.best2(U & ~(1 << i), i, i, t[i], k + 1)) == target
                    if ok:
                        stations.append([i])
                        U, p, f, used, k = U & ~(1 << i), i, i, t[i], k + 1
                        acc += self.kind == 1
                        break
                else:
                    raise AssertionError("oracle walk lost the optimum")
                continue
            moved = False
            for i in self.ready(U):
                nxt = used + tau[p][i] + t[i]
                if self.kind == 1:
                    ok = nxt <= self.c and self.best1(U & ~(1 << i), i, f, nxt) == target - acc
                else:
                    ok = max(acc, self.best2(U & ~(1 << i), i, f, nxt, k)) == target
                if ok:
                    stations[-1].append(i)
                    U, p, used = U & ~(1 << i), i, nxt
                    moved = True
                    break
            if moved:
                continue
            if self.kind == 2:
                acc = max(acc, used + mu[p][f])
            p = f = None
            used = 0
        return stations


def _sys_recursion(n: int) -> None:
    need = 200 + 40 * n
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


class CostToGo:
    """Reusable cost-to-go oracle for search states of one instance."""

    def __init__(self, inst: Instance, problem_type: int):
        _guard(inst)
        _sys_recursion(inst.n)
        self.inst = inst
        self.kind = problem_type
        self.en = _Enumerator(inst, problem_type)

    def split(self, state):
        n = self.inst.n
        U, k = state.unscheduled, state.station_idx
        f = None if state.first_task >= n else state.first_task
        p = None if f is None else state.prev_task
        if self.kind == 1:
            used = 0 if f is None else self.inst.cycle_time - state.remaining
            floor = 0
        else:
            used = 0 if f is None else state.used_time
            floor = state.cycle
        return U, p, f, used, k, floor

    def __call__(self, state) -> Optional[int]:
        """New stations still needed (type-1) or the best final cycle time (type-2)."""
        U, p, f, used, k, floor = self.split(state)
        value = self.en.value(U, p, f, used, k)
        return None if value == INF else int(max(value, floor))


def brute_force(inst: Instance, problem_type: int, start=None) -> OracleResult:
    """Optimal objective (and one optimal solution) by exhaustive recursion.

    ``start`` may be a type-1 or type-2 search state; the result is then the
    optimal cost-to-go from that state: new stations to open for type-1, the
    final cycle time for type-2. No solution is built in that case.
    """
    ctg = CostToGo(inst, problem_type)
    if start is not None:
        return OracleResult(ctg(start), None)
    en = ctg.en
    U = (1 << inst.n) - 1
    value = en.value(U, None, None, 0, 0)
    if value == INF:
        return OracleResult(None, None)
    stations = en.walk(U, None, None, 0, 0)
    sol = make_solution(inst, stations, problem_type)
    assert sol.objective == value, (sol.objective, value)
    return OracleResult(int(value), sol)


def _topological_orders(inst: Instance):
    n = inst.n
    pos_ok = [(i, j) for i, j in inst.precedence]
    for perm in permutations(range(n)):
        where = {v: a for a, v in enumerate(perm)}
        if all(where[i] < where[j] for i, j in pos_ok):
            yield perm


def enumerate_plain(inst: Instance, problem_type: int) -> Optional[int]:
    """Every topological order times every break pattern; only for n <= 7."""
    if inst.n > 7:
        raise OracleRefused("plain enumeration is limited to n <= 7")
    best = None
    n = inst.n
    for perm in _topological_orders(inst):
        for mask in range(1 << max(n - 1, 0)):
            stations, cur = [], [perm[0]]
            for a in range(1, n):
                if mask >> (a - 1) & 1:
                    stations.append(cur)
                    cur = []
                cur.append(perm[a])
            stations.append(cur)
            times = [station_time(inst, s) for s in stations]
            if problem_type == 1:
                if max(times) > inst.cycle_time:
                    continue
                val = len(stations)
            else:
                if len(stations) > inst.station_count:
                    continue
                val = max(times)
            if best is None or val < best:
                best = val
    return best


def salbp_enumerate(inst: Instance, problem_type: int) -> Optional[int]:
    """Plain line balancing without setups: try every station index per task."""
    n = inst.n
    t = inst.task_times
    top = n if problem_type == 1 else min(n, inst.station_count)
    best = None
    for assign in product(range(top), repeat=n):
        if any(assign[i] > assign[j] for i, j in inst.precedence):
            continue
        loads = [0] * top
        for i, k in enumerate(assign):
            loads[k] += t[i]
        used = [x for x in loads if x]
        # station indices may be sparse; only the nonempty ones count
        if problem_type == 1:
            if max(used) > inst.cycle_time:
                continue
            val = len(used)
        else:
            val = max(used)
        if best is None or val < best:
            best = val
    return best


def best_sequence_permutations(inst: Instance, tasks) -> tuple[list[int], int]:
    """Cheapest precedence-feasible order of ``tasks`` by station time (global ids)."""
    pred_star, _ = transitive_closure(inst.precedence, inst.n)
    best = None
    for perm in permutations(tasks):
        seen = set()
        ok = True
        for v in perm:
            if pred_star[v] & set(tasks) - seen:
                ok = False
                break
            seen.add(v)
        if ok:
            st = station_time(inst, perm)
            if best is None or st < best[1]:
                best = (list(perm), st)
    return best
