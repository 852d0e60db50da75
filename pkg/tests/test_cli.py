import csv
import io
import json
import sys

import pytest

from conftest import requires_solver
from cosmop import __version__
from cosmop.cli import main
from cosmop.config import ConfigError, load_config, parse_config
from cosmop.dwa import ObstacleState, dump_obstacles
from cosmop.tasks import data_text


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    (d / "scene.json").write_text(data_text("cleanup_scene.json"))
    (d / "goal.ltl").write_text(data_text("cleanup.ltl"))
    return d


@pytest.fixture(scope="module")
def plan_file(files):
    if main(["plan", "--scene", str(files / "scene.json"), "--spec", str(files / "goal.ltl"),
             "--K", "24", "--out", str(files / "plan.json")]) != 0:
        pytest.fail("clean-up plan synthesis failed")
    return files / "plan.json"


def test_version_and_help(capsys):
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out
    assert main(["--help"]) == 0
    assert main([]) == 1
    assert main(["plan"]) == 1


@requires_solver
def test_plan_cleanup(plan_file):
    data = json.loads(plan_file.read_text())
    assert data["K"] == 24 and len(data["steps"]) == 24


@requires_solver
def test_plan_to_stdout_with_range(files, capsys):
    goal = files / "taut.ltl"
    goal.write_text("Last[ robot.x = robot.x ]\n")
    code = main(["plan", "--scene", str(files / "scene.json"), "--spec", str(goal), "--k-min", "1", "--k-max", "3"])
    assert code == 0
    out = capsys.readouterr()
    assert json.loads(out.out)["K"] == 1
    assert "plan: K=1" in out.err


@requires_solver
def test_plan_too_short_is_infeasible(files, capsys):
    code = main(["plan", "--scene", str(files / "scene.json"), "--spec", str(files / "goal.ltl"), "--K", "2"])
    assert code == 2
    assert "infeasible" in capsys.readouterr().err


def test_plan_input_errors(files, tmp_path, capsys):
    spec = str(files / "goal.ltl")
    assert main(["plan", "--scene", str(tmp_path / "missing.json"), "--spec", spec, "--K", "3"]) == 1
    bad = tmp_path / "bad.ltl"
    bad.write_text("G( x <= )")
    assert main(["plan", "--scene", str(files / "scene.json"), "--spec", str(bad), "--K", "3"]) == 1
    assert "line 1" in capsys.readouterr().err
    assert main(["plan", "--scene", str(files / "scene.json"), "--spec", spec]) == 1
    assert main(["plan", "--scene", str(files / "scene.json"), "--spec", spec, "--K", "0"]) == 1


def test_plan_timeout_exit_code(files, tmp_path, monkeypatch):
    slow = tmp_path / "slow_solver.py"
    slow.write_text("import time\ntime.sleep(10)\n")
    monkeypatch.setenv("COSMOP_SMT_CMD", f"{sys.executable} {slow}")
    code = main(["plan", "--scene", str(files / "scene.json"), "--spec", str(files / "goal.ltl"),
                 "--K", "3", "--timeout", "300"])
    assert code == 3


@requires_solver
def test_simulate_nominal(plan_file, files, tmp_path, capsys):
    svg, trace = tmp_path / "run.svg", tmp_path / "run.csv"
    code = main(["simulate", "--plan", str(plan_file), "--scene", str(files / "scene.json"),
                 "--svg", str(svg), "--trace-csv", str(trace)])
    assert code == 0
    assert "legs reached" in capsys.readouterr().err
    assert svg.read_text().startswith("<svg")
    rows = list(csv.reader(io.StringIO(trace.read_text())))
    assert rows[0] == ["t", "x", "y", "heading", "v", "w", "min_dist", "phi_ps"]


@requires_solver
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_simulate_crossing_pedestrian(plan_file, files, tmp_path, seed):
    ped = [ObstacleState(-1750, -1500, 0.0, 400.0, 150.0, "constant"),
           ObstacleState(0, 2000, 0.0, -300.0, 100.0, "adversarial")]
    obs = tmp_path / "moving.json"
    obs.write_text(dump_obstacles(ped))
    code = main(["simulate", "--plan", str(plan_file), "--scene", str(files / "scene.json"),
                 "--obstacles", str(obs), "--seed", str(seed), "--max-t", "30"])
    assert code in (0, 4)


@requires_solver
def test_simulate_blocked_leg_suggests_replan(plan_file, files, tmp_path, capsys):
    plan = json.loads(plan_file.read_text())
    first_goto = next(s for s in plan["steps"] if s["primitive"] == "GoTo")
    w = first_goto["waypoint"]
    obs = tmp_path / "parked.json"
    obs.write_text(dump_obstacles([ObstacleState(w["x"], w["y"], radius=200)]))
    replan = tmp_path / "replan_scene.json"
    code = main(["simulate", "--plan", str(plan_file), "--scene", str(files / "scene.json"),
                 "--obstacles", str(obs), "--max-t", "5", "--replan-scene", str(replan)])
    assert code == 4
    err = capsys.readouterr().err
    assert "stopped safely" in err and "replan" in err
    assert json.loads(replan.read_text())["robot"]


def test_simulate_rejects_unknown_primitive(files, tmp_path, capsys):
    bad = tmp_path / "bad_plan.json"
    bad.write_text(json.dumps({"steps": [{"k": 1, "primitive": "Fly", "arg": None,
                                          "waypoint": {"x": 0, "y": 0, "alpha": 0}}]}))
    assert main(["simulate", "--plan", str(bad), "--scene", str(files / "scene.json")]) == 1
    assert "Fly" in capsys.readouterr().err


@requires_solver
def test_simulate_rejects_plan_for_other_scene(plan_file, files, tmp_path):
    scene = json.loads((files / "scene.json").read_text())
    scene["obstacles"].append({"xi": -2400, "yi": -200, "xf": 2400, "yf": -200})
    other = tmp_path / "other.json"
    other.write_text(json.dumps(scene))
    assert main(["simulate", "--plan", str(plan_file), "--scene", str(other)]) == 1


@requires_solver
def test_bench_size_suite_csv(tmp_path, capsys):
    out = tmp_path / "size.csv"
    assert main(["bench", "--suite", "size", "--reps", "1", "--csv", str(out), "--jobs", "2"]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [int(r["env_m"]) for r in rows] == [4, 8, 16, 32, 64, 128, 256]
    assert all(r["sat"] == "true" and r["rooms"] == "9" and r["K"] == "14" for r in rows)
    assert "mean (ms)" in capsys.readouterr().out


def test_bench_usage_errors():
    assert main(["bench", "--suite", "huge"]) == 1
    assert main(["bench", "--suite", "size", "--reps", "0"]) == 1


def test_bench_non_sat_rows_exit_2(monkeypatch, tmp_path):
    mock = tmp_path / "unsat_solver.py"
    mock.write_text("import sys\nsys.stdin.read()\nprint('unsat')\n")
    monkeypatch.setenv("COSMOP_SMT_CMD", f"{sys.executable} {mock}")
    assert main(["bench", "--suite", "rooms", "--reps", "1"]) == 2


# ------------------------------------------------------------------ configuration

def test_config_parsing(tmp_path, monkeypatch):
    monkeypatch.delenv("COSMOP_SMT_CMD", raising=False)
    text = '[solver]\ncmd = "cvc5 --lang smt2"  # comment\ntimeout_ms = 5000\n[dwa]\nv_max = 800.0\n'
    assert parse_config(text) == {"solver.cmd": "cvc5 --lang smt2", "solver.timeout_ms": 5000, "dwa.v_max": 800.0}
    p = tmp_path / "c.toml"
    p.write_text(text)
    cfg = load_config(p)
    assert cfg["solver.cmd"] == "cvc5 --lang smt2" and cfg["bench.reps"] == 35
    monkeypatch.setenv("COSMOP_SMT_CMD", "z3 -in -T:5")
    assert load_config(p)["solver.cmd"] == "z3 -in -T:5"
    with pytest.raises(ConfigError):
        parse_config("[solver\ncmd = 1")


def test_bad_config_file_exits_1(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text("cmd = unquoted words\n")
    assert main(["--config", str(p), "bench", "--suite", "size"]) == 1
    assert main(["--config", str(tmp_path / "missing.toml"), "bench", "--suite", "size"]) == 1
