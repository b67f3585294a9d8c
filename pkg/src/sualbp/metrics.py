"""Anytime quality measures: primal gap and primal integral, in exact arithmetic."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence


def primal_gap(incumbent: Optional[int | Fraction], reference: int | Fraction) -> Fraction:
    """Normalized distance of an incumbent objective from the reference, in [0, 1]."""
    if incumbent is None:
        return Fraction(1)
    inc, ref = Fraction(incumbent), Fraction(reference)
    if inc == 0 and ref == 0:
        return Fraction(0)
    if inc * ref < 0:
        return Fraction(1)
    return abs(ref - inc) / max(abs(ref), abs(inc))


@dataclass
class IncumbentTrace:
    """Incumbent objectives over time for one run.

    ``points`` holds (seconds since start, objective) with strictly increasing
    times and strictly improving objectives. ``infeasible_at`` marks a proof of
    infeasibility, after which the gap counts as 0.
    """

    points: list[tuple[Fraction, int]] = field(default_factory=list)
    horizon: Fraction = Fraction(0)
    reference: Optional[int] = None
    infeasible_at: Optional[Fraction] = None

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[float, int]], horizon, reference=None, infeasible_at=None):
        pts = [(Fraction(t), int(obj)) for t, obj in pairs]
        inf = None if infeasible_at is None else Fraction(infeasible_at)
        return cls(pts, Fraction(horizon), reference, inf)

    def gap_at(self, t: Fraction) -> Fraction:
        if self.infeasible_at is not None and t >= self.infeasible_at:
            return Fraction(0)
        current = None
        for when, obj in self.points:
            if when > t:
                break
            current = obj
        ref = self.reference
        if ref is None:
            # without a known optimum the run's own final incumbent is the reference
            if not self.points:
                return Fraction(1)
            ref = self.points[-1][1]
        return primal_gap(current, ref)


def primal_integral(trace: IncumbentTrace) -> Fraction:
    """Area under the step function of primal gaps from 0 to the horizon.

    The gap on [t_{i-1}, t_i) is the gap of the incumbent known at t_{i-1},
    with sentinels t_0 = 0 and t_L = T.
    """
    T = trace.horizon
    cuts = {Fraction(0), T}
    cuts.update(t for t, _ in trace.points if 0 <= t <= T)
    if trace.infeasible_at is not None and 0 <= trace.infeasible_at <= T:
        cuts.add(trace.infeasible_at)
    times = sorted(cuts)
    total = Fraction(0)
    for a, b in zip(times, times[1:]):
        total += trace.gap_at(a) * (b - a)
    return total
