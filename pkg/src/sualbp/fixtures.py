"""Published reference values for the SBF2 type-2 benchmark.

``TYPE2_OPTIMA`` are proven optimal cycle times keyed by (instance stem, alpha).
``TYPE2_CLASS_SUMMARY`` lists, per (class, alpha), the instance count, mean gap
in percent, mean time in seconds, feasible count and optimal count reported
for the dynamic programming approach on an 1800 s budget.
"""

from __future__ import annotations

from typing import Optional

TYPE2_OPTIMA: dict[tuple[str, float], int] = {
    ("jackson_c=7", 0.75): 9,
    ("jackson_c=14", 0.50): 12,
    ("lutz1_c=2357b", 0.25): 2475,
    ("sawyer30_c=54", 0.75): 58,
    ("hahn_c=1806", 0.25): 2830,
    ("hahn_c=4676", 0.25): 4847,
}

TYPE2_CLASS_SUMMARY: dict[tuple[str, float], tuple[int, float, float, int, int]] = {
    ("A", 0.25): (33, 0.00, 0.0007, 33, 33),
    ("A", 0.50): (33, 0.00, 0.0012, 33, 33),
    ("A", 0.75): (33, 0.00, 0.0022, 33, 33),
    ("A", 1.00): (33, 0.00, 0.0038, 33, 33),
    ("B", 0.25): (35, 0.00, 3, 35, 35),
    ("B", 0.50): (35, 0.00, 4, 35, 35),
    ("B", 0.75): (35, 0.00, 7, 35, 35),
    ("B", 1.00): (35, 0.00, 8, 35, 35),
    ("C", 0.25): (47, 1.47, 824, 47, 34),
    ("C", 0.50): (47, 3.07, 922, 47, 28),
    ("C", 0.75): (47, 4.13, 951, 47, 28),
    ("C", 1.00): (47, 4.99, 919, 47, 27),
    ("D", 0.25): (82, 11.25, 1556, 82, 13),
    ("D", 0.50): (82, 14.03, 1575, 82, 13),
    ("D", 0.75): (82, 17.14, 1616, 82, 12),
    ("D", 1.00): (82, 18.77, 1627, 82, 11),
}

# Task data of the jackson precedence graph (no setups), used for rounding checks.
JACKSON_TIMES = (6, 2, 5, 7, 1, 2, 3, 6, 5, 5, 4)
JACKSON_PRECEDENCE = (
    (1, 2), (1, 3), (1, 4), (1, 5), (2, 6), (3, 7), (4, 7), (5, 7),
    (6, 8), (7, 9), (8, 10), (9, 11), (10, 11),
)  # 1-based


def size_class(n: int) -> str:
    if n <= 25:
        return "A"
    if n <= 35:
        return "B"
    if n <= 70:
        return "C"
    return "D"


def reference_objective(name: str, alpha: Optional[float]) -> Optional[int]:
    if alpha is None:
        return None
    return TYPE2_OPTIMA.get((name, round(alpha, 2)))
