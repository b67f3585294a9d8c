import json

import pytest

from sualbp import cli
from sualbp.instance import make_instance, save_instance
from sualbp.search import NO_SOLUTION, SolveResult, SearchStats


@pytest.fixture
def inst_file(tmp_path, three_tasks):
    path = tmp_path / "three.json"
    save_instance(three_tasks, path)
    return path


def test_solve1(inst_file, capsys):
    assert cli.main(["solve1", str(inst_file)]) == 0
    assert "status     optimal" in capsys.readouterr().out


def test_solve2_json(inst_file, capsys):
    assert cli.main(["solve2", str(inst_file), "--m", "2", "--json", "--local-improve"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["objective"] == 10 and payload["status"] == "optimal"
    assert payload["m"] == 2
    assert sorted(i for s in payload["stations"] for i in s) == [1, 2, 3]


def test_missing_file():
    assert cli.main(["solve1", "/nonexistent/x.alb"]) == 1


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        cli.main(["solve3"])
    assert info.value.code == 2


def test_infeasible_exit(tmp_path):
    path = tmp_path / "inf.json"
    save_instance(make_instance([5], (), [[0]], [[9]], cycle_time=10), path)
    assert cli.main(["solve1", str(path)]) == 3


def test_timeout_without_solution_exit(inst_file, monkeypatch):
    monkeypatch.setattr(cli, "solve", lambda *a, **k: SolveResult(None, 1, NO_SOLUTION, [], SearchStats(), 0.0))
    assert cli.main(["solve1", str(inst_file)]) == 4


def test_validate_with_oracle(inst_file, capsys):
    assert cli.main(["validate", str(inst_file), "--oracle"]) == 0
    out = capsys.readouterr().out
    assert "oracle objective: 10" in out


def test_bench_command(tmp_path, inst_file, capsys):
    out = tmp_path / "bench"
    assert cli.main(["bench", str(inst_file), "--type", "1", "--out", str(out), "--time-limit", "5"]) == 0
    assert (out / "results.csv").exists()
