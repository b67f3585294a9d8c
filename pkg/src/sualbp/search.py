"""Complete anytime beam search over a state-transition model.

Beam searches are repeated with widths 1, 2, 4, ... . A beam search that
never had to drop a node for lack of width has explored every state that
could still beat the incumbent, which proves the incumbent optimal (or the
instance infeasible when there is none).

A model provides ``root``, ``is_base``, ``successors``, ``cost``, ``bound``,
``priority``, ``key`` and ``dominates``; see :mod:`sualbp.model`.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .instance import validate_instance
from .model import Transition, Type1Model, Type2Model
from .preprocess import derive
from .solution import ConsistencyError, Solution, make_solution, solution_from_path, validate_solution

__all__ = [
    "SearchNode",
    "SearchStats",
    "SolveResult",
    "SolverConfig",
    "cabs",
    "reconstruct",
    "solve",
    "validate_solution",
]

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
NO_SOLUTION = "timeout-no-solution"


class SearchNode:
    __slots__ = ("state", "g", "h", "f", "parent", "via", "seq", "dead")

    def __init__(self, state, g, h, f, parent, via, seq):
        self.state = state
        self.g = g
        self.h = h
        self.f = f
        self.parent = parent
        self.via = via
        self.seq = seq
        self.dead = False

    def path(self) -> list[Transition]:
        out = []
        node = self
        while node.parent is not None:
            out.append(node.via)
            node = node.parent
        return out[::-1]


@dataclass
class SearchStats:
    expanded: int = 0
    generated: int = 0
    pruned_by_bound: int = 0
    pruned_by_dominance: int = 0
    pruned_duplicate: int = 0
    iterations: int = 0
    final_width: int = 0
    li_calls: int = 0
    li_improved: int = 0


@dataclass
class SolveResult:
    best: Optional[Solution]
    lower_bound: int
    status: str
    trace: list[tuple[float, int]]
    stats: SearchStats
    elapsed: float = 0.0

    @property
    def objective(self) -> int | None:
        return None if self.best is None else self.best.objective


def reconstruct(node: SearchNode, model) -> Solution:
    """Decode a base-state node and check the decoded objective against its cost."""
    path = node.path()
    decode = getattr(model, "decode", None)
    if decode is not None:
        sol = decode(path)
    else:
        sol = solution_from_path(model.pre.instance, path, model.problem_type)
    if sol.objective != node.g:
        raise ConsistencyError(f"decoded objective {sol.objective} != path cost {node.g}")
    return sol


class _Budget(Exception):
    pass


class _Cabs:
    def __init__(self, model, time_limit, node_limit, initial, on_incumbent, on_expand, clock):
        self.model = model
        self.time_limit = time_limit
        self.node_limit = node_limit
        self.on_incumbent = on_incumbent
        self.on_expand = on_expand
        self.clock = clock
        self.start = clock()
        self.stats = SearchStats()
        self.best: Solution | None = None
        self.ub = math.inf
        self.trace: list[tuple[float, int]] = []
        self.seq = 0
        if initial is not None:
            self._accept(initial)

    def elapsed(self) -> float:
        return self.clock() - self.start

    def _accept(self, sol: Solution) -> bool:
        if sol.objective >= self.ub:
            return False
        self.best = sol
        self.ub = sol.objective
        self.trace.append((self.elapsed(), sol.objective))
        log.debug("incumbent %s at %.3fs", sol.objective, self.trace[-1][0])
        return True

    def _incumbent(self, node: SearchNode) -> None:
        sol = reconstruct(node, self.model)
        if not self._accept(sol):
            return
        if self.on_incumbent is not None:
            better = self.on_incumbent(sol, self.trace[-1][0])
            if better is not None:
                self._accept(better)

    def _check_time(self) -> None:
        if self.time_limit is not None and self.elapsed() >= self.time_limit:
            raise _Budget("time")

    def beam(self, width: int) -> tuple[bool, float]:
        """One beam search; returns (exhaustive, smallest priority dropped for width)."""
        model = self.model
        use_dom = model.use_dominance
        stats = self.stats
        registry: dict = {}
        stored = 0
        root = model.root()
        h = model.bound(root)
        self.seq += 1
        layer = [SearchNode(root, 0, h, model.priority(0, h), None, None, self.seq)]
        exhaustive = True
        dropped_f = math.inf
        while layer:
            candidates = []
            for node in layer:
                if node.dead or node.f >= self.ub:
                    continue
                stats.expanded += 1
                if stats.expanded % 128 == 0:
                    self._check_time()
                if self.on_expand is not None:
                    self.on_expand(node.state, node.g)
                for tr, child in model.successors(node.state):
                    stats.generated += 1
                    g = model.cost(node.g, tr, child)
                    if model.is_base(child):
                        if g < self.ub:
                            self.seq += 1
                            self._incumbent(SearchNode(child, g, 0, g, node, tr, self.seq))
                        else:
                            stats.pruned_by_bound += 1
                        continue
                    h = model.bound(child)
                    f = model.priority(g, h)
                    if f >= self.ub:
                        stats.pruned_by_bound += 1
                        continue
                    key = model.key(child)
                    entries = registry.get(key)
                    if entries is None:
                        entries = registry[key] = []
                    else:
                        drop = False
                        for e in entries:
                            if use_dom:
                                if model.dominates(e.state, e.g, child, g):
                                    drop = True
                                    stats.pruned_by_dominance += 1
                                    break
                            elif e.state == child and e.g <= g:
                                drop = True
                                stats.pruned_duplicate += 1
                                break
                        if drop:
                            continue
                        keep = []
                        for e in entries:
                            if use_dom:
                                beaten = model.dominates(child, g, e.state, e.g)
                            else:
                                beaten = e.state == child
                            if beaten:
                                e.dead = True
                                stats.pruned_by_dominance += use_dom
                                stats.pruned_duplicate += not use_dom
                            else:
                                keep.append(e)
                        entries[:] = keep
                    self.seq += 1
                    new = SearchNode(child, g, h, f, node, tr, self.seq)
                    entries.append(new)
                    stored += 1
                    if self.node_limit is not None and stored > self.node_limit:
                        raise _Budget("memory")
                    candidates.append(new)
            ub = self.ub
            candidates = [c for c in candidates if not c.dead and c.f < ub]
            if len(candidates) > width:
                candidates.sort(key=lambda c: (c.f, c.h, c.seq))
                exhaustive = False
                dropped_f = min(dropped_f, candidates[width].f)
                candidates = candidates[:width]
            layer = candidates
        return exhaustive, dropped_f

    def run(self, max_width: int | None) -> SolveResult:
        model = self.model
        root = model.root()
        lb = model.priority(0, model.bound(root))
        status = None
        width = 1
        try:
            if model.is_base(root):
                self.seq += 1
                self._incumbent(SearchNode(root, 0, 0, 0, None, None, self.seq))
            while True:
                if self.best is not None and lb >= self.ub:
                    status = OPTIMAL
                    break
                self.stats.iterations += 1
                self.stats.final_width = width
                exhaustive, dropped_f = self.beam(width)
                if exhaustive:
                    status = OPTIMAL if self.best is not None else INFEASIBLE
                    if self.best is not None:
                        lb = self.best.objective
                    break
                lb = max(lb, min(self.ub, dropped_f))
                log.debug("width %d done: lb=%s ub=%s", width, lb, self.ub)
                if max_width is not None and width >= max_width:
                    raise _Budget("width")
                width *= 2
        except _Budget as why:
            log.info("search stopped early: %s", why)
        if status is None:
            status = FEASIBLE if self.best is not None else NO_SOLUTION
        if status == OPTIMAL:
            lb = self.best.objective
        lb_out = lb if status != INFEASIBLE else lb
        return SolveResult(self.best, int(lb_out), status, self.trace, self.stats, self.elapsed())


def cabs(
    model,
    *,
    time_limit: float | None = None,
    node_limit: int | None = 2_000_000,
    max_width: int | None = None,
    initial: Solution | None = None,
    on_incumbent: Callable[[Solution, float], Optional[Solution]] | None = None,
    on_expand: Callable[[object, int], None] | None = None,
    clock: Callable[[], float] = time.perf_counter,
) -> SolveResult:
    """Run complete anytime beam search on ``model``.

    ``on_incumbent(solution, elapsed)`` fires for every improving solution and
    may return an even better solution, which then becomes the incumbent.
    ``node_limit`` caps the states stored by one beam search; hitting it ends
    the run without an optimality proof.
    """
    return _Cabs(model, time_limit, node_limit, initial, on_incumbent, on_expand, clock).run(max_width)


@dataclass
class SolverConfig:
    time_limit: float | None = None
    node_limit: int | None = 2_000_000
    dual_bounds: bool = True
    dominance: bool = True
    local_improve: bool = False
    seed_incumbent: bool = True
    exact_sequencing_limit: int = 10
    extra: dict = field(default_factory=dict)


def solve(inst, problem_type: int, config: SolverConfig | None = None, on_incumbent=None, on_expand=None) -> SolveResult:
    """Validate, preprocess, and run CABS (optionally with local improvement)."""
    from .local_improve import LocalImprover
    from .preprocess import InfeasibleInstance

    config = config or SolverConfig()
    diag = validate_instance(inst, problem_type)
    if diag.errors:
        if problem_type == 1 and all("infeasible" in e for e in diag.errors):
            return SolveResult(None, 0, INFEASIBLE, [], SearchStats())
        raise ValueError("invalid instance: " + "; ".join(diag.errors))
    try:
        pre = derive(inst, problem_type)
    except InfeasibleInstance:
        return SolveResult(None, 0, INFEASIBLE, [], SearchStats())
    if problem_type == 1:
        model = Type1Model(pre, use_bounds=config.dual_bounds, use_dominance=config.dominance)
    else:
        model = Type2Model(pre, use_bounds=config.dual_bounds, use_dominance=config.dominance)
    initial = make_solution(inst, pre.greedy, problem_type) if config.seed_incumbent else None

    callback = on_incumbent
    improver = None
    if config.local_improve and problem_type == 2:
        improver = LocalImprover(inst, pre.pred_star, exact_limit=config.exact_sequencing_limit)

        def callback(sol, elapsed):
            better = improver(sol)
            user = on_incumbent(sol, elapsed) if on_incumbent is not None else None
            if user is not None and (better is None or user.objective < better.objective):
                return user
            return better

        if initial is not None:
            initial = improver(initial) or initial

    result = cabs(
        model,
        time_limit=config.time_limit,
        node_limit=config.node_limit,
        initial=initial,
        on_incumbent=callback,
        on_expand=on_expand,
    )
    if improver is not None:
        result.stats.li_calls = improver.calls
        result.stats.li_improved = improver.improved
    return result
