from itertools import permutations

import pytest
from hypothesis import given, settings

from conftest import instances
from sualbp.instance import make_instance
from sualbp.oracle import brute_force
from sualbp.preprocess import (
    InfeasibleInstance,
    compute_bounds_type1,
    compute_bounds_type2,
    compute_windows,
    derive,
    greedy_stations,
    station_time,
    transitive_closure,
)


def closure_by_squaring(edges, n):
    reach = [[False] * n for _ in range(n)]
    for i, j in edges:
        reach[i][j] = True
    for _ in range(max(1, n.bit_length())):
        reach = [
            [reach[i][j] or any(reach[i][k] and reach[k][j] for k in range(n)) for j in range(n)] for i in range(n)
        ]
    return reach


def all_solutions(inst):
    """Every (topological order, break pattern) as a list of stations."""
    n = inst.n
    for perm in permutations(range(n)):
        where = {v: a for a, v in enumerate(perm)}
        if any(where[i] > where[j] for i, j in inst.precedence):
            continue
        for mask in range(1 << (n - 1)):
            stations, cur = [], [perm[0]]
            for a in range(1, n):
                if mask >> (a - 1) & 1:
                    stations.append(cur)
                    cur = []
                cur.append(perm[a])
            stations.append(cur)
            yield stations


def test_chain_closure():
    pred, succ = transitive_closure([(0, 1), (1, 2)], 3)
    assert pred[2] == {0, 1}
    assert succ[0] == {1, 2}


def test_empty_closure():
    pred, succ = transitive_closure([], 4)
    assert all(not p for p in pred) and all(not s for s in succ)


@settings(max_examples=50, deadline=None)
@given(instances(n_min=1, n_max=8, edge_prob=0.4))
def test_closure_matches_matrix_powers(inst):
    pred, succ = transitive_closure(inst.precedence, inst.n)
    reach = closure_by_squaring(inst.precedence, inst.n)
    for i in range(inst.n):
        assert pred[i] == {j for j in range(inst.n) if reach[j][i]}
        assert all(i in pred[j] for j in succ[i])
        assert {j for j, _ in inst.precedence if _ == i} <= pred[i]


def test_window_formulas():
    inst = make_instance([5], cycle_time=10)
    E, L, FS, FT, A = compute_windows(inst, (frozenset(),), (frozenset(),), 10, 3)
    assert E == (1,) and L == (3,)
    # t_i = 5 with predecessors totalling 16 at c = 10 lands no earlier than station 3
    inst = make_instance([8, 8, 5], [(0, 2), (1, 2)], cycle_time=10)
    pred, succ = transitive_closure(inst.precedence, 3)
    E, L, FS, FT, A = compute_windows(inst, pred, succ, 10, 4)
    assert E[2] == 3
    assert FS[2] == range(3, 5)
    assert 2 in FT[3] and 2 not in FT[2]


def test_empty_window_is_infeasible():
    inst = make_instance([8, 8, 8], [(0, 1), (1, 2)], cycle_time=10)
    pred, succ = transitive_closure(inst.precedence, 3)
    with pytest.raises(InfeasibleInstance):
        compute_windows(inst, pred, succ, 10, 2)


def test_bounds_examples():
    inst = make_instance([3, 4, 5], cycle_time=12)
    assert compute_bounds_type1(inst)[0] == 1
    assert compute_bounds_type1(inst.with_cycle_time(5))[0] == 3
    assert compute_bounds_type2(make_instance([3, 4, 5], station_count=3))[0] == 5
    assert compute_bounds_type2(make_instance([6, 6], station_count=1))[0] == 12


def test_uniform_setup_minima():
    n = 4
    tau = [[0 if i == j else 1 for j in range(n)] for i in range(n)]
    pre = derive(make_instance([2] * n, (), tau, tau, cycle_time=20), 1)
    assert pre.min_fwd_setup == (1,) * n


def test_no_possible_predecessor_gives_zero():
    # in a chain 1 -> 2 -> 3 only task 1 can come first; nothing may precede it forward
    n = 3
    tau = [[0, 4, 4], [4, 0, 4], [4, 4, 0]]
    pre = derive(make_instance([1] * n, [(0, 1), (1, 2)], tau, cycle_time=20), 1)
    assert pre.min_fwd_setup[0] == 0
    assert pre.min_fwd_setup[1] == 4


@settings(max_examples=40, deadline=None)
@given(instances(n_min=1, n_max=8))
def test_set_identities(inst):
    pre = derive(inst, 1)
    n = inst.n
    for i in range(n):
        assert pre.pred_direct[i] <= pre.pred_star[i]
        for j in pre.pred_star[i]:
            assert i in pre.succ_star[j]
        assert pre.earliest_station[i] <= pre.latest_station[i]
        assert i not in pre.fwd_followers[i]
        for j in pre.fwd_preds[i]:
            assert pre.min_fwd_setup[i] <= inst.fwd_setup[j][i]
        for j in pre.bwd_preds[i]:
            assert pre.min_bwd_setup[i] <= inst.bwd_setup[j][i]
    assert pre.m_lower <= pre.m_upper
    pre2 = derive(inst, 2)
    assert pre2.c_lower <= pre2.c_upper


@settings(max_examples=40, deadline=None)
@given(instances(n_min=1, n_max=8))
def test_setup_minima_formula(inst):
    pre = derive(inst, 1)
    n = inst.n
    for i in range(n):
        # j may directly precede i unless i is j itself, an indirect follower of
        # j, a predecessor of j, or can never share a station with j
        allowed = [
            j
            for j in range(n)
            if j != i
            and i not in pre.succ_star[j] - pre.succ_direct[j]
            and i not in pre.pred_star[j]
            and i not in pre.incompatible[j]
        ]
        assert pre.min_fwd_setup[i] == min((inst.fwd_setup[j][i] for j in allowed), default=0)
        allowed_b = [j for j in range(n) if i not in pre.succ_star[j] and i not in pre.incompatible[j]]
        assert pre.min_bwd_setup[i] == min((inst.bwd_setup[j][i] for j in allowed_b), default=0)


@settings(max_examples=30, deadline=None)
@given(instances(n_min=1, n_max=6))
def test_bounds_sandwich_oracle(inst):
    lo, hi = compute_bounds_type1(inst)
    opt = brute_force(inst, 1).objective
    assert lo <= opt <= hi
    clo, chi = compute_bounds_type2(inst)
    opt2 = brute_force(inst, 2).objective
    assert clo <= opt2 <= chi


@settings(max_examples=25, deadline=None)
@given(instances(n_min=1, n_max=6))
def test_windows_and_minima_contain_every_solution(inst):
    """Any solution within the bounds keeps every task in its window and only
    uses setups that are at least the precomputed minima."""
    for kind in (1, 2):
        pre = derive(inst, kind)
        for stations in all_solutions(inst):
            times = [station_time(inst, s) for s in stations]
            if kind == 1 and (len(stations) > pre.m_upper or max(times) > inst.cycle_time):
                continue
            if kind == 2 and (len(stations) > inst.station_count or max(times) > pre.c_upper):
                continue
            for k, seq in enumerate(stations, 1):
                for i in seq:
                    assert pre.earliest_station[i] <= k <= pre.latest_station[i]
                for a, b in zip(seq, seq[1:]):
                    assert b in pre.fwd_followers[a]
                    assert inst.fwd_setup[a][b] >= pre.min_fwd_setup[b]
                assert seq[0] in pre.bwd_followers[seq[-1]]
                assert inst.bwd_setup[seq[-1]][seq[0]] >= pre.min_bwd_setup[seq[0]]


def test_greedy_reports_impossible_task():
    inst = make_instance([5, 12], cycle_time=10)
    assert greedy_stations(inst, 10) is None
    with pytest.raises(InfeasibleInstance):
        compute_bounds_type1(inst)
