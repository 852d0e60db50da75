import csv
import io

import pytest

from conftest import requires_solver
from cosmop.logic.evaluate import evaluate
from cosmop.rooms import (
    CSV_COLUMNS, DOOR_OFFSET, SUITES, BenchRow, BenchScenario, format_table, grid_side, make_rooms_scene,
    rows_to_csv, run_scenario, run_scenarios,
)
from cosmop.scene import aabb_disjoint


@pytest.mark.parametrize("rooms, n", [(4, 2), (9, 3), (81, 9)])
def test_grid_side(rooms, n):
    assert grid_side(rooms) == n


@pytest.mark.parametrize("rooms", [1, 8, 10, 0])
def test_grid_side_rejects_non_squares(rooms):
    with pytest.raises(ValueError):
        grid_side(rooms)


def test_three_by_three_layout():
    scene, goal = make_rooms_scene(4, 9)
    assert len(scene.obstacles) == 12
    assert len(scene.doors) == 12
    assert scene.workspace.l == 4000
    # start at the centre of the lower-left room
    centre = -2000 + 4000 / 6
    assert abs(scene.robot.x - centre) < 1 and abs(scene.robot.y - centre) < 1
    for d in scene.doors:
        # the two poses straddle a wall, facing each other
        assert abs(d.q1.x - d.q2.x) + abs(d.q1.y - d.q2.y) == 2 * DOOR_OFFSET
        assert (d.q1.alpha - d.q2.alpha) % 360 == 180


def test_two_by_two_minimal_grid():
    scene, _ = make_rooms_scene(4, 4)
    assert len(scene.obstacles) == 4 and len(scene.doors) == 4


def test_sealed_goal_room_has_no_doors():
    scene, _ = make_rooms_scene(8, 9, sealed_goal=True)
    assert len(scene.doors) == 10
    # every remaining door pose lies outside the goal room
    lo = scene.workspace.l // 2 - scene.workspace.l // 3
    assert all(not (q.x > lo and q.y > lo) for d in scene.doors for q in (d.q1, d.q2))


def test_too_small_environment_rejected():
    with pytest.raises(ValueError, match="too small"):
        make_rooms_scene(4, 81)


def test_door_poses_clear_of_walls():
    scene, _ = make_rooms_scene(8, 16)
    half = scene.agent.l / 2
    for d in scene.doors:
        for q in (d.q1, d.q2):
            box = scene.robot_rect(q.x, q.y)
            assert all(aabb_disjoint(box, o.rect) for o in scene.obstacles), (q, half)


def test_suite_rows():
    assert [m for m, _, _ in SUITES["size"]] == [4, 8, 16, 32, 64, 128, 256]
    assert all((r, k) == (9, 14) for _, r, k in SUITES["size"])
    assert SUITES["rooms"] == [(32, 9, 50), (32, 25, 50), (32, 49, 50), (32, 81, 50)]
    assert [(r, k) for _, r, k in SUITES["complexity"]] == [
        (9, 14), (16, 20), (25, 26), (36, 32), (49, 38), (64, 44), (81, 50)]


def test_scenario_validation():
    with pytest.raises(ValueError):
        BenchScenario(4, 9, 14, repetitions=0)
    with pytest.raises(ValueError):
        BenchScenario(4, 7, 14)


def test_csv_schema_is_stable():
    rows = [BenchRow(BenchScenario(4, 9, 14, 2), 12.3456, 0.5, True),
            BenchRow(BenchScenario(8, 9, 14, 2), 1.0, 0.0, False, "unsat")]
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == "env_m,rooms,K,mean_ms,std_ms,sat"
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert tuple(parsed[0]) == CSV_COLUMNS
    assert parsed[0]["mean_ms"] == "12.346" and parsed[1]["sat"] == "false"
    assert text == rows_to_csv(rows)
    table = format_table(rows)
    assert "NO (unsat)" in table and "yes" in table


@requires_solver
def test_smallest_size_row_is_sat():
    row = run_scenario(BenchScenario(4, 9, 14, repetitions=2))
    assert row.sat and row.verdict == "sat" and row.mean_ms > 0


@requires_solver
def test_interleaved_rows_keep_their_own_repetition_counts():
    scenarios = [BenchScenario(4, 9, 14, repetitions=3), BenchScenario(4, 4, 10, repetitions=1)]
    rows = run_scenarios(scenarios)
    assert [r.scenario for r in rows] == scenarios
    assert [len(r.times_ms) for r in rows] == [3, 1]
    assert all(r.sat for r in rows)
    assert rows[1].std_ms == 0.0


@requires_solver
def test_rooms_plan_reaches_goal_room():
    from cosmop.planner import PlanRequest, synthesize, validate_plan
    scene, goal = make_rooms_scene(4, 4)
    plan = synthesize(PlanRequest(scene, goal, (1, 10)))
    assert evaluate(goal, plan.full_trace, 0)
    assert validate_plan(plan).ok
