"""Re-sequencing of single stations and the local improvement loop for type-2.

Task-to-station assignments stay fixed; only the order inside a station
changes. Processing times are constant for a station, so a station's time is
its processing total plus the setup cost of the chosen order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Sequence

from .instance import Instance
from .model import ASSIGN_FIRST, ASSIGN_NEXT, CLOSE_STATION, Transition, bits
from .preprocess import station_time, transitive_closure
from .solution import Solution, make_solution


def setup_cost(inst: Instance, seq: Sequence[int]) -> int:
    tau = inst.fwd_setup
    return sum(tau[a][b] for a, b in zip(seq, seq[1:])) + inst.bwd_setup[seq[-1]][seq[0]]


@dataclass(frozen=True)
class StationSubproblem:
    """One station's tasks with local indices 0..k-1 (``tasks`` maps back)."""

    tasks: tuple[int, ...]
    within_pred: tuple[int, ...]  # bit mask of local predecessors
    fwd: tuple[tuple[int, ...], ...]
    bwd: tuple[tuple[int, ...], ...]
    min_fwd: tuple[int, ...]
    min_bwd: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.tasks)

    @property
    def dummy(self) -> int:
        return len(self.tasks)


def build_subproblem(inst: Instance, tasks: Sequence[int], pred_star=None) -> StationSubproblem:
    if pred_star is None:
        pred_star, _ = transitive_closure(inst.precedence, inst.n)
    tasks = tuple(tasks)
    k = len(tasks)
    local = {v: a for a, v in enumerate(tasks)}
    pred = tuple(sum(1 << local[j] for j in pred_star[v] if j in local) for v in tasks)
    fwd = tuple(tuple(inst.fwd_setup[u][v] for v in tasks) for u in tasks)
    bwd = tuple(tuple(inst.bwd_setup[u][v] for v in tasks) for u in tasks)
    # a task can be entered from any other task that is not one of its followers
    min_fwd = tuple(
        min((fwd[a][b] for a in range(k) if a != b and not pred[a] >> b & 1), default=0) for b in range(k)
    )
    # the closing setup comes from the last task, never a predecessor of the first
    min_bwd = tuple(
        min((bwd[a][b] for a in range(k) if not pred[b] >> a & 1), default=0) for b in range(k)
    )
    return StationSubproblem(tasks, pred, fwd, bwd, min_fwd, min_bwd)


class SequencingModel:
    """State-transition model over (U, p, f) for one station; costs are setups only."""

    problem_type = 0

    def __init__(self, sub: StationSubproblem, use_bounds: bool = True, use_dominance: bool = True):
        self.sub = sub
        self.use_bounds = use_bounds
        self.use_dominance = use_dominance

    def root(self):
        d = self.sub.dummy
        return ((1 << self.sub.size) - 1, d, d)

    def is_base(self, s) -> bool:
        return s[0] == 0 and s[1] == self.sub.dummy

    def successors(self, s):
        sub = self.sub
        U, p, f = s
        d = sub.dummy
        if p == d and U == 0:
            return []
        avail = [i for i in bits(U) if not U & sub.within_pred[i]]
        if f == d:
            return [(Transition(ASSIGN_FIRST, i, 0), (U & ~(1 << i), i, i)) for i in avail]
        out = [(Transition(ASSIGN_NEXT, i, sub.fwd[p][i]), (U & ~(1 << i), i, f)) for i in avail]
        if U == 0:
            out.append((Transition(CLOSE_STATION, None, sub.bwd[p][f]), (0, d, d)))
        return out

    def cost(self, g: int, tr: Transition, child) -> int:
        return g + tr.weight

    def bound(self, s) -> int:
        U, p, f = s
        if not self.use_bounds or p == self.sub.dummy:
            return 0
        return sum(self.sub.min_fwd[i] for i in bits(U)) + self.sub.min_bwd[f]

    def priority(self, g: int, h: int) -> int:
        return g + h

    def key(self, s):
        return s

    def dominates(self, a, g_a: int, b, g_b: int) -> bool:
        return g_a <= g_b

    def decode(self, path: Sequence[Transition]) -> Solution:
        seq = tuple(self.sub.tasks[tr.task] for tr in path if tr.kind != CLOSE_STATION)
        cost = sum(tr.weight for tr in path)
        return Solution((seq,), (cost,), cost, tuple(path))


def best_sequence_dp(sub: StationSubproblem) -> tuple[list[int], int]:
    """Exact subset DP over (scheduled set, last task) for each first task; local indices."""
    k = sub.size
    full = (1 << k) - 1
    pred, fwd, bwd = sub.within_pred, sub.fwd, sub.bwd
    best: tuple[int, list[int]] | None = None
    for f in range(k):
        if pred[f]:
            continue
        # cost[mask][p]: cheapest forward setups over orders of mask starting at f, ending at p
        cost: dict[tuple[int, int], int] = {(1 << f, f): 0}
        back: dict[tuple[int, int], int] = {}
        for mask in range(1 << k):
            if not mask >> f & 1:
                continue
            for p in bits(mask):
                here = cost.get((mask, p))
                if here is None:
                    continue
                for i in bits(full & ~mask):
                    if pred[i] & ~mask:
                        continue
                    key = (mask | 1 << i, i)
                    val = here + fwd[p][i]
                    if val < cost.get(key, val + 1):
                        cost[key] = val
                        back[key] = p
        for p in range(k):
            here = cost.get((full, p))
            if here is None:
                continue
            total = here + bwd[p][f]
            seq = []
            mask, cur = full, p
            while True:
                seq.append(cur)
                if (mask, cur) not in back:
                    break
                prev = back[(mask, cur)]
                mask &= ~(1 << cur)
                cur = prev
            seq.reverse()
            if best is None or (total, seq) < best:
                best = (total, seq)
    assert best is not None, "station tasks have cyclic precedence"
    return best[1], best[0]


def best_sequence_bruteforce(sub: StationSubproblem) -> tuple[list[int], int]:
    """Enumerate every permutation (local indices); for tests on small stations."""
    best = None
    for perm in permutations(range(sub.size)):
        placed = 0
        ok = True
        for i in perm:
            if sub.within_pred[i] & ~placed:
                ok = False
                break
            placed |= 1 << i
        if not ok:
            continue
        total = sum(sub.fwd[a][b] for a, b in zip(perm, perm[1:])) + sub.bwd[perm[-1]][perm[0]]
        if best is None or (total, list(perm)) < best:
            best = (total, list(perm))
    return best[1], best[0]


def resequence_station(
    sub: StationSubproblem, exact_limit: int = 10, current: Sequence[int] | None = None
) -> tuple[list[int], int]:
    """Setup-minimal order of the station's tasks, as (global task ids, setup cost).

    Uses the subset DP up to ``exact_limit`` tasks and beam search on the
    sequencing model above it (seeded with ``current`` when given).
    """
    if sub.size == 1:
        return [sub.tasks[0]], sub.bwd[0][0]
    if sub.size <= exact_limit:
        seq, cost = best_sequence_dp(sub)
        return [sub.tasks[i] for i in seq], cost
    from .search import cabs

    model = SequencingModel(sub)
    initial = None
    if current is not None:
        local = {v: a for a, v in enumerate(sub.tasks)}
        path = [Transition(ASSIGN_FIRST, local[current[0]], 0)]
        path += [Transition(ASSIGN_NEXT, local[b], sub.fwd[local[a]][local[b]]) for a, b in zip(current, current[1:])]
        path.append(Transition(CLOSE_STATION, None, sub.bwd[local[current[-1]]][local[current[0]]]))
        initial = model.decode(path)
    result = cabs(model, initial=initial, node_limit=None)
    return list(result.best.stations[0]), result.best.objective


def local_improvement(
    inst: Instance, sol: Solution, pred_star=None, exact_limit: int = 10
) -> Optional[Solution]:
    """Re-sequence stations in decreasing time order until one stops paying off.

    Stops at the first station whose new time is not below its old time or
    not below the next station's time (0 after the last station). All
    improvements found up to and including that station are kept. Returns
    None when no station changed.
    """
    if pred_star is None:
        pred_star, _ = transitive_closure(inst.precedence, inst.n)
    stations = [tuple(s) for s in sol.stations]
    times = list(sol.station_times)
    order = sorted(range(len(stations)), key=lambda k: (-times[k], k))
    changed = False
    for pos, k in enumerate(order):
        seq = stations[k]
        sub = build_subproblem(inst, seq, pred_star)
        new_seq, cost = resequence_station(sub, exact_limit, current=seq)
        new_time = sum(inst.task_times[i] for i in seq) + cost
        old_time = times[k]
        if new_time < old_time:
            stations[k] = tuple(new_seq)
            times[k] = new_time
            changed = True
        nxt = times[order[pos + 1]] if pos + 1 < len(order) else 0
        if new_time >= old_time or new_time >= nxt:
            break
    if not changed:
        return None
    out = make_solution(inst, stations, 2)
    assert all(station_time(inst, s) == t for s, t in zip(out.stations, times))
    return out


class LocalImprover:
    """Incumbent callback for type-2 searches; counts calls and real improvements."""

    def __init__(self, inst: Instance, pred_star=None, exact_limit: int = 10):
        self.inst = inst
        self.pred_star = pred_star if pred_star is not None else transitive_closure(inst.precedence, inst.n)[0]
        self.exact_limit = exact_limit
        self.calls = 0
        self.improved = 0

    def __call__(self, sol: Solution, elapsed: float | None = None) -> Optional[Solution]:
        self.calls += 1
        better = local_improvement(self.inst, sol, self.pred_star, self.exact_limit)
        if better is not None and better.objective < sol.objective:
            self.improved += 1
            return better
        return None
