"""State-transition models for type-1 and type-2 line balancing with setups.

Both models build one station at a time: ``assign_first`` opens a station,
``assign_next`` appends to the open station and ``close_station`` seals it
and pays the backward setup from the last task to the first. The dummy task
(no station open) is the index ``n``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

from .preprocess import DerivedData

ASSIGN_FIRST = "assign_first"
ASSIGN_NEXT = "assign_next"
CLOSE_STATION = "close_station"


class Transition(NamedTuple):
    kind: str
    task: int | None
    weight: int


class State1(NamedTuple):
    unscheduled: int  # bit set over tasks
    station_idx: int
    prev_task: int
    first_task: int
    remaining: int


class State2(NamedTuple):
    unscheduled: int
    station_idx: int
    prev_task: int
    first_task: int
    used_time: int
    cycle: int


class KnapsackWeights(NamedTuple):
    w2: Fraction
    w2p: Fraction
    w3: Fraction
    l2: Fraction
    l3: Fraction


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# Knapsack weights are kept as sixths so the bound stays in integer arithmetic.

def _w2(t: int, c: int) -> int:
    return 1 if 2 * t > c else 0


def _w2p6(t: int, c: int) -> int:
    return 3 if 2 * t == c else 0


def _w3_6(t: int, c: int) -> int:
    if 3 * t > 2 * c:
        return 6
    if 3 * t == 2 * c:
        return 4
    if 3 * t > c:
        return 3
    if 3 * t == c:
        return 2
    return 0


def knapsack_weights(t: int, c: int, r: int = 0) -> KnapsackWeights:
    """Per-task bin-packing weights for duration ``t`` plus the credits of a
    station that still has ``r`` units free (the free space acts as a phantom
    task, so an empty remainder earns nothing)."""
    if not 0 < t <= c:
        raise ValueError(f"task time {t} outside (0, {c}]")
    if not 0 <= r <= c:
        raise ValueError(f"remaining time {r} outside [0, {c}]")
    l2 = _w2(r, c) + Fraction(_w2p6(r, c), 6) if r else Fraction(0)
    l3 = Fraction(_w3_6(r, c), 6) if r else Fraction(0)
    return KnapsackWeights(
        Fraction(_w2(t, c)), Fraction(_w2p6(t, c), 6), Fraction(_w3_6(t, c), 6), Fraction(l2), l3
    )


def bound1_terms(
    times: Sequence[int],
    tau_lo: Sequence[int],
    mu_lo: Sequence[int],
    mu_f: int,
    kappa: int,
    r: int,
    c: int,
    m_lower: int,
    m_upper: int,
) -> tuple[int, int, int, int, int]:
    """The five remaining-station bounds for a type-1 state whose unscheduled
    tasks have the given times and setup minima."""
    sum_t = sum(times)
    max_tau = max(tau_lo, default=0)
    min_mu = min(mu_lo, default=0)
    t1 = _ceil_div(
        mu_f + sum_t + sum(tau_lo) - (m_upper - kappa) * max_tau + max(m_lower - kappa, 0) * min_mu - r, c
    )
    t2 = _ceil_div(mu_f + sum_t - r, c)
    t3 = _ceil_div(sum_t - r, c)
    w2 = sum(_w2(t, c) for t in times)
    w2p = sum(_w2p6(t, c) for t in times)
    w3 = sum(_w3_6(t, c) for t in times)
    l2 = (6 * _w2(r, c) + _w2p6(r, c)) if r else 0
    l3 = _w3_6(r, c) if r else 0
    t4 = w2 + _ceil_div(w2p - l2, 6)
    t5 = _ceil_div(w3 - l3, 6)
    return t1, t2, t3, t4, t5


def bound2_increments(
    times: Sequence[int],
    tau_lo: Sequence[int],
    mu_lo: Sequence[int],
    mu_f: int,
    kappa: int,
    used: int,
    cycle: int,
    m: int,
) -> tuple[int, int]:
    """Lower bounds on how much the cycle time still has to grow (type-2)."""
    div = min(m, m - kappa + 1)
    max_tau = max(tau_lo, default=0)
    min_mu = min(mu_lo, default=0)
    sum_t = sum(times)
    n1 = sum(tau_lo) + sum_t + used + (m - kappa) * (min_mu - max_tau) + mu_f
    n2 = sum_t + used
    return _ceil_div(n1, div) - cycle, _ceil_div(n2, div) - cycle


class _Tables:
    """Extended arrays with the dummy task appended at index n."""

    def __init__(self, pre: DerivedData):
        inst = pre.instance
        n = inst.n
        self.n = n
        self.dummy = n
        self.t = list(inst.task_times) + [0]
        self.tau = [list(row) + [0] for row in inst.fwd_setup] + [[0] * (n + 1)]
        self.mu = [list(row) + [0] for row in inst.bwd_setup] + [[0] * (n + 1)]
        self.tau_lo = list(pre.min_fwd_setup) + [0]
        self.mu_lo = list(pre.min_bwd_setup) + [0]
        self.pred_mask = pre.pred_mask
        self.full = (1 << n) - 1

    def available(self, U: int) -> list[int]:
        pm = self.pred_mask
        return [i for i in bits(U) if not U & pm[i]]


class Type1Model:
    """Minimize the number of stations for a fixed cycle time."""

    problem_type = 1

    def __init__(self, pre: DerivedData, use_bounds: bool = True, use_dominance: bool = True):
        if pre.instance.cycle_time is None:
            raise ValueError("type-1 model needs a cycle time")
        self.pre = pre
        self.tab = _Tables(pre)
        self.c = pre.instance.cycle_time
        self.use_bounds = use_bounds
        self.use_dominance = use_dominance

    def root(self) -> State1:
        d = self.tab.dummy
        return State1(self.tab.full, 0, d, d, 0)

    def is_base(self, s: State1) -> bool:
        return s.unscheduled == 0 and s.first_task == self.tab.dummy

    def successors(self, s: State1) -> list[tuple[Transition, State1]]:
        tab, c = self.tab, self.c
        U, k, p, f, r = s
        t, tau, mu, d = tab.t, tab.tau, tab.mu, tab.dummy
        out = []
        if f == d:
            for i in tab.available(U):
                if t[i] <= c:
                    out.append((Transition(ASSIGN_FIRST, i, 1), State1(U & ~(1 << i), k + 1, i, i, c - t[i])))
            return out
        can_close = mu[p][f] <= r
        tau_p = tau[p]
        for i in tab.available(U):
            need = t[i] + tau_p[i]
            if need <= r:
                out.append((Transition(ASSIGN_NEXT, i, 0), State1(U & ~(1 << i), k, i, f, r - need)))
                if need + mu[i][f] <= r:
                    can_close = False
        if can_close:
            out.append((Transition(CLOSE_STATION, None, 0), State1(U, k, d, d, 0)))
        return out

    def cost(self, g: int, tr: Transition, child: State1) -> int:
        return g + tr.weight

    def bound_terms(self, s: State1) -> tuple[int, ...]:
        tab, pre = self.tab, self.pre
        ids = list(bits(s.unscheduled))
        return bound1_terms(
            [tab.t[i] for i in ids],
            [tab.tau_lo[i] for i in ids],
            [tab.mu_lo[i] for i in ids],
            tab.mu_lo[s.first_task],
            s.station_idx,
            s.remaining,
            self.c,
            pre.m_lower,
            pre.m_upper,
        )

    def bound(self, s: State1) -> int:
        if not self.use_bounds:
            return 0
        return max(0, *self.bound_terms(s))

    def priority(self, g: int, h: int) -> int:
        return g + h

    def key(self, s: State1):
        return (s.unscheduled, s.prev_task, s.first_task)

    def dominates(self, a: State1, g_a: int, b: State1, g_b: int) -> bool:
        return a.station_idx <= b.station_idx and a.remaining >= b.remaining and g_a <= g_b


class Type2Model:
    """Minimize the cycle time for a fixed number of stations."""

    problem_type = 2

    def __init__(self, pre: DerivedData, m: int | None = None, use_bounds: bool = True, use_dominance: bool = True):
        self.pre = pre
        self.tab = _Tables(pre)
        self.m = m if m is not None else pre.instance.station_count
        if self.m is None:
            raise ValueError("type-2 model needs a station count")
        self.use_bounds = use_bounds
        self.use_dominance = use_dominance

    def root(self) -> State2:
        d = self.tab.dummy
        return State2(self.tab.full, 0, d, d, 0, 0)

    def is_base(self, s: State2) -> bool:
        return s.unscheduled == 0 and s.first_task == self.tab.dummy

    def successors(self, s: State2) -> list[tuple[Transition, State2]]:
        tab = self.tab
        U, k, p, f, tc, cyc = s
        t, tau, mu, d = tab.t, tab.tau, tab.mu, tab.dummy
        out = []
        if f == d:
            if k < self.m:
                for i in tab.available(U):
                    ti = t[i]
                    out.append(
                        (Transition(ASSIGN_FIRST, i, ti), State2(U & ~(1 << i), k + 1, i, i, ti, max(cyc, ti)))
                    )
            return out
        tau_p = tau[p]
        for i in tab.available(U):
            new = tc + t[i] + tau_p[i]
            out.append((Transition(ASSIGN_NEXT, i, new), State2(U & ~(1 << i), k, i, f, new, max(cyc, new))))
        new = tc + mu[p][f]
        out.append((Transition(CLOSE_STATION, None, new), State2(U, k, d, d, new, max(cyc, new))))
        return out

    def cost(self, g: int, tr: Transition, child: State2) -> int:
        return child.cycle

    def bound_increments(self, s: State2) -> tuple[int, int]:
        tab = self.tab
        ids = list(bits(s.unscheduled))
        return bound2_increments(
            [tab.t[i] for i in ids],
            [tab.tau_lo[i] for i in ids],
            [tab.mu_lo[i] for i in ids],
            tab.mu_lo[s.first_task],
            s.station_idx,
            s.used_time,
            s.cycle,
            self.m,
        )

    def bound(self, s: State2) -> int:
        """Lower bound on the final cycle time (never below the current one)."""
        if not self.use_bounds:
            return s.cycle
        return s.cycle + max(0, *self.bound_increments(s))

    def priority(self, g: int, h: int) -> int:
        return max(g, h)

    def key(self, s: State2):
        return (s.unscheduled, s.prev_task, s.first_task, s.station_idx)

    def dominates(self, a: State2, g_a: int, b: State2, g_b: int) -> bool:
        return a.used_time <= b.used_time and a.cycle <= b.cycle


# Function-style API over a DerivedData. Tables are cached per DerivedData object.

_MODEL_CACHE: dict[tuple[int, int, int | None], object] = {}


def _model(pre: DerivedData, kind: int, m: int | None = None):
    key = (id(pre), kind, m)
    hit = _MODEL_CACHE.get(key)
    if hit is None or hit.pre is not pre:
        if len(_MODEL_CACHE) > 64:
            _MODEL_CACHE.clear()
        hit = Type1Model(pre) if kind == 1 else Type2Model(pre, m)
        _MODEL_CACHE[key] = hit
    return hit


def successors_type1(s: State1, pre: DerivedData) -> list[tuple[Transition, State1]]:
    return _model(pre, 1).successors(s)


def successors_type2(s: State2, pre: DerivedData, m: int | None = None) -> list[tuple[Transition, State2]]:
    return _model(pre, 2, m).successors(s)


def dual_bound_type1(s: State1, pre: DerivedData) -> int:
    return _model(pre, 1).bound(s)


def dual_bound_type2(s: State2, pre: DerivedData, m: int | None = None) -> int:
    return _model(pre, 2, m).bound(s)


def dominates(a, b, g_a: int, g_b: int) -> bool:
    """Whether state ``a`` (reached at cost ``g_a``) makes ``b`` redundant."""
    if type(a) is not type(b):
        raise TypeError("states of different models")
    if isinstance(a, State1):
        return (
            a.unscheduled == b.unscheduled
            and a.prev_task == b.prev_task
            and a.first_task == b.first_task
            and a.station_idx <= b.station_idx
            and a.remaining >= b.remaining
            and g_a <= g_b
        )
    return (
        a.unscheduled == b.unscheduled
        and a.prev_task == b.prev_task
        and a.first_task == b.first_task
        and a.station_idx == b.station_idx
        and a.used_time <= b.used_time
        and a.cycle <= b.cycle
    )
