"""Exact anytime solver for assembly line balancing with sequence-dependent setups."""

from .instance import Instance, Rounding, derive_station_count, load_instance, make_instance, parse_alb, validate_instance
from .oracle import brute_force
from .search import SolverConfig, SolveResult, cabs, solve
from .solution import Solution, validate_solution

__all__ = [
    "Instance",
    "Rounding",
    "Solution",
    "SolveResult",
    "SolverConfig",
    "brute_force",
    "cabs",
    "derive_station_count",
    "load_instance",
    "make_instance",
    "parse_alb",
    "solve",
    "validate_instance",
    "validate_solution",
]
