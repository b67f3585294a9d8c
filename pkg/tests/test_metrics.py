from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sualbp.metrics import IncumbentTrace, primal_gap, primal_integral


@pytest.mark.parametrize(
    "inc, ref, gap",
    [
        (None, 10, 1),
        (0, 0, 0),
        (12, 10, Fraction(1, 6)),
        (10, 10, 0),
        (-3, 4, 1),
        (8, 10, Fraction(1, 5)),
    ],
)
def test_gap_examples(inc, ref, gap):
    assert primal_gap(inc, ref) == gap


def test_integral_without_incumbent():
    assert primal_integral(IncumbentTrace.from_pairs([], 10, reference=5)) == 10


def test_integral_optimal_at_start():
    assert primal_integral(IncumbentTrace.from_pairs([(0, 10)], 10, reference=10)) == 0


def test_integral_two_steps():
    # gap 1 on [0,2), 1/2 on [2,5), 0 on [5,10]
    trace = IncumbentTrace.from_pairs([(2, 20), (5, 10)], 10, reference=10)
    assert primal_integral(trace) == Fraction(7, 2)


def test_reference_defaults_to_final_incumbent():
    trace = IncumbentTrace.from_pairs([(2, 20), (5, 10)], 10)
    assert primal_integral(trace) == Fraction(7, 2)


def test_infeasibility_proof_zeroes_gap():
    trace = IncumbentTrace.from_pairs([], 10, infeasible_at=4)
    assert primal_integral(trace) == 4


traces = st.builds(
    lambda times, objs, horizon: IncumbentTrace.from_pairs(
        list(zip(sorted(set(times)), sorted(set(objs), reverse=True))), horizon
    ),
    st.lists(st.integers(0, 50), max_size=6),
    st.lists(st.integers(1, 100), max_size=6),
    st.integers(1, 60),
)


@given(traces)
def test_integral_between_zero_and_horizon(trace):
    p = primal_integral(trace)
    assert 0 <= p <= trace.horizon
    assert isinstance(p, Fraction)


@given(traces, st.integers(1, 30))
def test_integral_grows_with_horizon(trace, extra):
    longer = IncumbentTrace(trace.points, trace.horizon + extra, trace.reference)
    assert primal_integral(longer) >= primal_integral(trace)
