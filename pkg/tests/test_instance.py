import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import instances
from sualbp.fixtures import JACKSON_PRECEDENCE, JACKSON_TIMES
from sualbp.instance import (
    AlbWarning,
    ParseError,
    Rounding,
    derive_station_count,
    dumps,
    from_document,
    load_instance,
    loads,
    make_instance,
    parse_alb,
    save_instance,
    to_alb,
    to_document,
    validate_instance,
)

SMALL_ALB = """\
<number of tasks>
3

<cycle time>
10

<order strength>
0.333

<task times>
1 3
2 4
3 5

<precedence relations>
1,3

<sequence dependent time increments>
1,2,1
1,3,1
2,1,1
2,3,1
3,1,1
3,2,1

<setup times backward>
1,1,1
1,2,1
1,3,1
2,1,1
2,2,1
2,3,1
3,1,1
3,2,1
3,3,1

<end>
"""


def test_parse_small_file():
    inst = parse_alb(SMALL_ALB)
    assert inst.n == 3
    assert inst.task_times == (3, 4, 5)
    assert inst.precedence == ((0, 2),)
    assert inst.cycle_time == 10
    assert inst.fwd_setup[0][1] == 1 and inst.fwd_setup[0][0] == 0
    assert all(v == 1 for row in inst.bwd_setup for v in row)


def test_missing_setup_sections_zero_filled_with_warning():
    text = "<number of tasks>\n2\n<task times>\n1 3\n2 4\n<end>\n"
    with pytest.warns(AlbWarning) as record:
        inst = parse_alb(text)
    messages = " ".join(str(w.message) for w in record)
    assert "forward" in messages and "backward" in messages
    assert inst.fwd_setup == ((0, 0), (0, 0))
    assert inst.bwd_setup == ((0, 0), (0, 0))


def test_unknown_tag_skipped_with_warning():
    text = SMALL_ALB.replace("<end>", "<colour>\nblue\n<end>")
    with pytest.warns(AlbWarning, match="colour"):
        inst = parse_alb(text)
    assert inst.n == 3


def test_backward_tag_synonym():
    text = SMALL_ALB.replace("<setup times backward>", "<backward setup times>")
    assert parse_alb(text) == parse_alb(SMALL_ALB)


@pytest.mark.parametrize(
    "edit, tag",
    [
        (("2 4", "1 4"), "task times"),  # duplicate id
        (("1,3\n", "1,7\n"), "precedence relations"),  # out of range
        (("1,3\n", "1,3\n3,1\n"), "precedence relations"),  # cycle
        (("1 3\n", "1 3.5\n"), "task times"),  # fractional
        (("3,2,1\n\n<setup", "3,2\n\n<setup"), "sequence dependent time increments"),
    ],
)
def test_parse_errors_name_line_and_tag(edit, tag):
    with pytest.raises(ParseError) as info:
        parse_alb(SMALL_ALB.replace(*edit, 1))
    assert info.value.tag == tag
    assert info.value.line is not None


def test_cycle_message():
    with pytest.raises(ParseError, match="cycle"):
        parse_alb(SMALL_ALB.replace("1,3\n", "1,3\n3,1\n"))


@settings(max_examples=60, deadline=None)
@given(instances(n_min=1, n_max=8))
def test_alb_round_trip(inst):
    text = to_alb(inst)
    back = parse_alb(text)
    assert back.task_times == inst.task_times
    assert back.precedence == inst.precedence
    assert back.fwd_setup == inst.fwd_setup
    assert back.bwd_setup == inst.bwd_setup
    assert back.cycle_time == inst.cycle_time
    assert parse_alb(to_alb(back)) == back


@settings(max_examples=60, deadline=None)
@given(instances(n_min=1, n_max=8))
def test_document_round_trip(inst):
    assert loads(dumps(inst)) == inst
    assert from_document(to_document(inst)) == inst


def test_document_rejects_fractional_values(three_tasks):
    doc = to_document(three_tasks)
    doc["task_times"][0] = 2.5
    with pytest.raises(ValueError):
        from_document(doc)


def test_load_and_save(tmp_path, three_tasks):
    for suffix in (".json", ".alb"):
        path = tmp_path / f"x{suffix}"
        save_instance(three_tasks, path)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            back = load_instance(path)
        assert back.task_times == three_tasks.task_times
        assert back.precedence == three_tasks.precedence


def test_alpha_from_directory(tmp_path, three_tasks):
    d = tmp_path / "alpha=0.50"
    d.mkdir()
    save_instance(three_tasks, d / "x.alb")
    assert load_instance(d / "x.alb").alpha == 0.5


def test_validate_clean():
    inst = make_instance([3, 4, 5], [(0, 2)])
    diag = validate_instance(inst)
    assert diag.errors == [] and diag.warnings == []


def test_validate_cycle():
    inst = make_instance([1, 1], [(0, 1), (1, 0)])
    assert any("cycle" in e for e in validate_instance(inst).errors)


def test_validate_triangle_warning():
    tau = [[0, 1, 100], [0, 0, 1], [0, 0, 0]]
    inst = make_instance([1, 1, 1], (), tau)
    warns = validate_instance(inst).warnings
    assert any("(1,2,3)" in w for w in warns)


def test_validate_triangle_warning_cap():
    n = 8
    tau = [[0 if i == j else 50 for j in range(n)] for i in range(n)]
    for j in range(n):
        for i in range(n):
            tau[i][j] = 50 if (i + j) % 2 else 0
    inst = make_instance([1] * n, (), tau)
    assert len(validate_instance(inst).warnings) <= 100


def test_validate_type1_task_too_long():
    inst = make_instance([5], (), [[0]], [[3]], cycle_time=7)
    assert any("infeasible" in e for e in validate_instance(inst, 1).errors)
    assert validate_instance(inst, 2).errors == ["type-2 run requires a station count"]


def test_validate_negative_and_shape():
    inst = make_instance([1, 2], (), [[0, -1], [0, 0]])
    assert any("negative" in e for e in validate_instance(inst).errors)


@pytest.mark.parametrize(
    "total, c, policy, m",
    [
        (46, 14, Rounding.HALF, 3),
        (46, 7, Rounding.HALF, 7),
        (46, 14, Rounding.CEIL, 4),
        (46, 14, Rounding.FLOOR, 3),
        (42, 14, Rounding.CEIL, 3),
        (21, 14, Rounding.HALF, 2),  # 1.5 rounds up
        (1, 50, Rounding.FLOOR, 1),  # never below one station
    ],
)
def test_derive_station_count(total, c, policy, m):
    inst = make_instance([total], cycle_time=c)
    assert derive_station_count(inst, policy) == m


def test_derive_station_count_needs_cycle_time():
    with pytest.raises(ValueError):
        derive_station_count(make_instance([1]))


@given(st.integers(1, 500), st.integers(1, 100), st.sampled_from(list(Rounding)))
def test_station_count_monotone_in_c(total, c, policy):
    a = derive_station_count(make_instance([total], cycle_time=c), policy)
    b = derive_station_count(make_instance([total], cycle_time=c + 1), policy)
    assert b <= a


def test_jackson_rounding_policies():
    # jackson has sum t = 46; the c=14 type-2 optimum of 12 with setups needs
    # at least 4 stations (3 stations give at least ceil(46/3) = 16 > 12)
    inst = make_instance(JACKSON_TIMES, [(i - 1, j - 1) for i, j in JACKSON_PRECEDENCE], cycle_time=14)
    assert inst.total_time == 46
    assert derive_station_count(inst, Rounding.CEIL) == 4
    assert derive_station_count(inst, Rounding.HALF) == 3
    assert derive_station_count(inst, Rounding.FLOOR) == 3
    assert -(-46 // 3) > 12
