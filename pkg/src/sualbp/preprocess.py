"""Derived quantities: closures, station windows, allowed setup pairs, bounds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .instance import Instance, InstanceError, topological_order


class InfeasibleInstance(InstanceError):
    pass


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def transitive_closure(precedence, n: int) -> tuple[tuple[frozenset, ...], tuple[frozenset, ...]]:
    """All predecessors and all followers of every task."""
    order = topological_order(n, precedence)
    direct_pred: list[set[int]] = [set() for _ in range(n)]
    for i, j in precedence:
        direct_pred[j].add(i)
    pred: list[set[int]] = [set() for _ in range(n)]
    for j in order:
        for i in direct_pred[j]:
            pred[j].add(i)
            pred[j] |= pred[i]
    succ: list[set[int]] = [set() for _ in range(n)]
    for j in range(n):
        for i in pred[j]:
            succ[i].add(j)
    return tuple(frozenset(s) for s in pred), tuple(frozenset(s) for s in succ)


def greedy_stations(inst: Instance, capacity: int) -> list[list[int]] | None:
    """Station-oriented first fit: fill a station with the lowest-index available
    task that still fits (including the closing backward setup), then open the
    next. Returns None when some available task cannot occupy a station alone."""
    n = inst.n
    t, tau, mu = inst.task_times, inst.fwd_setup, inst.bwd_setup
    npred = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for i, j in inst.precedence:
        npred[j] += 1
        succ[i].append(j)
    available = sorted(i for i in range(n) if npred[i] == 0)
    stations: list[list[int]] = []

    def release(i: int) -> None:
        for j in succ[i]:
            npred[j] -= 1
            if npred[j] == 0:
                available.append(j)
        available.sort()

    while available:
        first = next((i for i in available if t[i] + mu[i][i] <= capacity), None)
        if first is None:
            return None
        available.remove(first)
        release(first)
        seq = [first]
        used = t[first]
        while True:
            p = seq[-1]
            nxt = next((j for j in available if used + tau[p][j] + t[j] + mu[j][first] <= capacity), None)
            if nxt is None:
                break
            available.remove(nxt)
            release(nxt)
            used += tau[p][nxt] + t[nxt]
            seq.append(nxt)
        stations.append(seq)
    return stations


def station_time(inst: Instance, seq: Sequence[int]) -> int:
    """Processing plus consecutive forward setups plus one backward setup."""
    if not seq:
        return 0
    t, tau = inst.task_times, inst.fwd_setup
    total = sum(t[i] for i in seq)
    total += sum(tau[a][b] for a, b in zip(seq, seq[1:]))
    return total + inst.bwd_setup[seq[-1]][seq[0]]


def compute_bounds_type1(inst: Instance) -> tuple[int, int]:
    """Lower bound ceil(sum t / c) and the greedy station count."""
    c = inst.cycle_time
    if c is None:
        raise InstanceError("type-1 bounds need a cycle time")
    stations = greedy_stations(inst, c)
    if stations is None:
        raise InfeasibleInstance("a task does not fit on a station by itself")
    return max(1, _ceil_div(inst.total_time, c)), len(stations)


def _fallback_cycle(inst: Instance) -> int:
    n = inst.n
    fwd = sum(inst.task_times[i] + max(inst.fwd_setup[i]) for i in range(n))
    return fwd + max(max(row) for row in inst.bwd_setup)


def greedy_type2(inst: Instance, m: int) -> list[list[int]]:
    """Smallest capacity (binary search) for which the greedy fits in m stations."""
    lo = max(max(inst.task_times), _ceil_div(inst.total_time, m))
    hi = _fallback_cycle(inst)
    best = greedy_stations(inst, hi)
    assert best is not None and len(best) == 1
    while lo < hi:
        mid = (lo + hi) // 2
        st = greedy_stations(inst, mid)
        if st is not None and len(st) <= m:
            best, hi = st, mid
        else:
            lo = mid + 1
    return best


def compute_bounds_type2(inst: Instance) -> tuple[int, int]:
    m = inst.station_count
    if m is None:
        raise InstanceError("type-2 bounds need a station count")
    c_lo = max(max(inst.task_times), _ceil_div(inst.total_time, m))
    stations = greedy_type2(inst, m)
    c_hi = max(station_time(inst, s) for s in stations)
    return c_lo, max(c_lo, c_hi)


def compute_windows(inst: Instance, pred_star, succ_star, c_upper: int, m_upper: int):
    """Earliest/latest stations, station sets, task sets per station, incompatibilities."""
    n, t = inst.n, inst.task_times
    E = [_ceil_div(t[i] + sum(t[j] for j in pred_star[i]), c_upper) for i in range(n)]
    L = [m_upper + 1 - _ceil_div(t[i] + sum(t[j] for j in succ_star[i]), c_upper) for i in range(n)]
    bad = [i for i in range(n) if E[i] > L[i]]
    if bad:
        raise InfeasibleInstance(f"empty station window for tasks {[i + 1 for i in bad]}")
    FS = tuple(range(E[i], L[i] + 1) for i in range(n))
    FT = {k: frozenset(i for i in range(n) if E[i] <= k <= L[i]) for k in range(1, m_upper + 1)}
    A = tuple(frozenset(j for j in range(n) if L[j] < E[i] or L[i] < E[j]) for i in range(n))
    return tuple(E), tuple(L), FS, FT, A


def compute_setup_minima(inst: Instance, fwd_preds, bwd_preds) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Smallest allowed incoming forward/backward setup per task (0 if none allowed)."""
    tau, mu = inst.fwd_setup, inst.bwd_setup
    tau_lo = tuple(min((tau[j][i] for j in fwd_preds[i]), default=0) for i in range(inst.n))
    mu_lo = tuple(min((mu[j][i] for j in bwd_preds[i]), default=0) for i in range(inst.n))
    return tau_lo, mu_lo


@dataclass(frozen=True)
class DerivedData:
    instance: Instance
    problem_type: int
    pred_direct: tuple[frozenset, ...]
    succ_direct: tuple[frozenset, ...]
    pred_star: tuple[frozenset, ...]
    succ_star: tuple[frozenset, ...]
    pred_mask: tuple[int, ...]
    earliest_station: tuple[int, ...]
    latest_station: tuple[int, ...]
    feasible_stations: tuple[range, ...]
    feasible_tasks: dict
    incompatible: tuple[frozenset, ...]
    fwd_followers: tuple[frozenset, ...]
    fwd_preds: tuple[frozenset, ...]
    bwd_followers: tuple[frozenset, ...]
    bwd_preds: tuple[frozenset, ...]
    min_fwd_setup: tuple[int, ...]
    min_bwd_setup: tuple[int, ...]
    m_lower: int
    m_upper: int
    c_lower: int
    c_upper: int
    greedy: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def definite_stations(self) -> range:
        return range(1, self.m_lower + 1)

    @property
    def possible_stations(self) -> range:
        return range(self.m_lower + 1, self.m_upper + 1)

    @property
    def all_stations(self) -> range:
        return range(1, self.m_upper + 1)


def derive(inst: Instance, problem_type: int) -> DerivedData:
    """Everything the models and bounds need, for a type-1 or type-2 run."""
    n = inst.n
    pred_star, succ_star = transitive_closure(inst.precedence, n)
    pred_direct = [set() for _ in range(n)]
    succ_direct = [set() for _ in range(n)]
    for i, j in inst.precedence:
        pred_direct[j].add(i)
        succ_direct[i].add(j)

    if problem_type == 1:
        m_lo, m_hi = compute_bounds_type1(inst)
        c_lo = c_hi = inst.cycle_time
        greedy = greedy_stations(inst, inst.cycle_time)
    elif problem_type == 2:
        c_lo, c_hi = compute_bounds_type2(inst)
        m_lo = m_hi = inst.station_count
        greedy = greedy_type2(inst, inst.station_count)
    else:
        raise ValueError(f"problem type must be 1 or 2, got {problem_type}")

    E, L, FS, FT, A = compute_windows(inst, pred_star, succ_star, c_hi, m_hi)
    V = frozenset(range(n))
    fwd_followers = tuple(
        V - (succ_star[i] - succ_direct[i]) - pred_star[i] - A[i] - {i} for i in range(n)
    )
    bwd_followers = tuple(V - succ_star[i] - A[i] for i in range(n))
    fwd_preds = tuple(frozenset(j for j in range(n) if i in fwd_followers[j]) for i in range(n))
    bwd_preds = tuple(frozenset(j for j in range(n) if i in bwd_followers[j]) for i in range(n))
    tau_lo, mu_lo = compute_setup_minima(inst, fwd_preds, bwd_preds)
    pred_mask = tuple(sum(1 << j for j in pred_star[i]) for i in range(n))

    return DerivedData(
        instance=inst,
        problem_type=problem_type,
        pred_direct=tuple(frozenset(s) for s in pred_direct),
        succ_direct=tuple(frozenset(s) for s in succ_direct),
        pred_star=pred_star,
        succ_star=succ_star,
        pred_mask=pred_mask,
        earliest_station=E,
        latest_station=L,
        feasible_stations=FS,
        feasible_tasks=FT,
        incompatible=A,
        fwd_followers=fwd_followers,
        fwd_preds=fwd_preds,
        bwd_followers=bwd_followers,
        bwd_preds=bwd_preds,
        min_fwd_setup=tau_lo,
        min_bwd_setup=mu_lo,
        m_lower=m_lo,
        m_upper=m_hi,
        c_lower=c_lo,
        c_upper=c_hi,
        greedy=tuple(tuple(s) for s in greedy),
    )
