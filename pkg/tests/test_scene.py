import io
import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosmop.errors import SceneError
from cosmop.scene import (
    Agent, Door, MovableObject, Obstacle, Pose, Rect, SceneDescription, Workspace, aabb_disjoint,
    dump_scene, example_scene, load_scene, merge_collinear, scene_to_dict,
)
from cosmop.tasks import cleanup_scene, data_text


def test_example_scene_loads_from_bundled_file():
    scene = load_scene(data_text("cleanup_scene.json"))
    assert len(scene.obstacles) == 2
    assert len(scene.doors) == 3
    assert [b.l for b in scene.objects] == [100, 100]
    assert scene.agent.l == 400
    assert scene.robot == Pose(-2000, 0, 0)
    assert scene == cleanup_scene() == example_scene()


def test_empty_scene_is_valid():
    data = {"workspace": {"x": 0, "y": 0, "l": 2000}, "agent": {"l": 400}, "robot": {"x": 0, "y": 0, "alpha": 0}}
    scene = load_scene(json.dumps(data))
    assert scene.obstacles == () and scene.doors == () and scene.objects == ()


def test_object_outside_workspace_rejected(cleanup_scene):
    data = scene_to_dict(cleanup_scene)
    data["objects"][0]["x"] = 10**6
    with pytest.raises(SceneError, match="outside"):
        load_scene(json.dumps(data))


@pytest.mark.parametrize("mutate, msg", [
    (lambda d: d["robot"].update(x=2401), "robot"),
    (lambda d: d["agent"].update(l=401), "even"),
    (lambda d: d["workspace"].update(l=800), "2 \\* agent.l"),
    (lambda d: d["robot"].update(alpha=360), "angle"),
    (lambda d: d["objects"][0].update(x=-1500, y=-1000), "overlaps obstacles"),
    (lambda d: d["doors"][0].update(q2=d["doors"][0]["q1"]), "differ"),
    (lambda d: d["objects"][0].update(x=1.5), "integer"),
    (lambda d: [b.update(carried=True) for b in d["objects"]], "at most one"),
    (lambda d: d.pop("agent"), "missing"),
])
def test_validation_errors(cleanup_scene, mutate, msg):
    data = scene_to_dict(cleanup_scene)
    mutate(data)
    with pytest.raises(SceneError, match=msg):
        load_scene(json.dumps(data))


def test_parse_error_and_sources(tmp_path, cleanup_scene):
    with pytest.raises(SceneError, match="parse"):
        load_scene("{not json")
    p = tmp_path / "s.json"
    p.write_text(dump_scene(cleanup_scene))
    assert load_scene(Path(p)) == cleanup_scene
    assert load_scene(io.BytesIO(p.read_bytes())) == cleanup_scene
    with pytest.raises(TypeError):
        load_scene(42)


def test_aabb_examples():
    assert aabb_disjoint(Rect(0, 0, 10, 10), Rect(10, 0, 20, 10))
    assert not aabb_disjoint(Rect(0, 0, 10, 10), Rect(5, 5, 15, 15))
    wall = Obstacle(-1500, 0, 2500, 0).rect
    robot = Rect.around(0, 1000, 200)
    # interval arithmetic: robot y-range [800, 1200] lies above the wall at y = 0
    assert robot.ymin == 800 and wall.ymax == 0
    assert aabb_disjoint(wall, robot)


coord = st.integers(-50, 50)


@st.composite
def rects(draw, min_side=0):
    x0, y0 = draw(coord), draw(coord)
    w, h = draw(st.integers(min_side, 30)), draw(st.integers(min_side, 30))
    return Rect(x0, y0, x0 + w, y0 + h)


@given(rects(), rects())
def test_aabb_symmetric(a, b):
    assert aabb_disjoint(a, b) == aabb_disjoint(b, a)


@given(rects(), rects())
def test_aabb_matches_interval_oracle(a, b):
    # open interiors intersect iff both open axis intervals intersect
    overlap_x = max(a.xmin, b.xmin) < min(a.xmax, b.xmax)
    overlap_y = max(a.ymin, b.ymin) < min(a.ymax, b.ymax)
    assert aabb_disjoint(a, b) == (not (overlap_x and overlap_y))


segments = st.builds(
    lambda horiz, c, a, n: Obstacle(a, c, a + n, c) if horiz else Obstacle(c, a, c, a + n),
    st.booleans(), st.integers(-20, 20), st.integers(-40, 40), st.integers(0, 30),
)


@given(st.lists(segments, max_size=6), rects(min_side=1))
def test_merge_collinear_preserves_disjointness(obstacles, box):
    before = all(aabb_disjoint(box, o.rect) for o in obstacles)
    after = all(aabb_disjoint(box, r) for r in merge_collinear(obstacles))
    assert before == after


def test_merge_collinear_fuses_touching_segments():
    obs = [Obstacle(0, 0, 10, 0), Obstacle(10, 0, 20, 0), Obstacle(30, 0, 40, 0), Obstacle(5, 5, 6, 6)]
    merged = merge_collinear(obs)
    assert Rect(0, 0, 20, 0) in merged and Rect(30, 0, 40, 0) in merged and Rect(5, 5, 6, 6) in merged
    assert len(merged) == 3


even = st.integers(-1000, 1000).map(lambda v: 2 * v)


@st.composite
def scenes(draw):
    agent = 2 * draw(st.integers(50, 250))
    side = 2 * draw(st.integers(max(agent + 1, 200), 5000))
    ws = Workspace(draw(st.integers(-100, 100)), draw(st.integers(-100, 100)), side)
    h = side // 2 - agent // 2
    pose = st.builds(Pose, st.integers(ws.x - h, ws.x + h), st.integers(ws.y - h, ws.y + h), st.integers(0, 359))
    doors = draw(st.lists(st.tuples(pose, pose).filter(lambda d: d[0] != d[1]).map(lambda d: Door(*d)), max_size=3))
    # obstacles far away on the left edge, objects placed in the right half
    obstacles = draw(st.lists(st.builds(lambda y: Obstacle(ws.x - side // 2, y, ws.x - side // 2, y + 10),
                                        st.integers(ws.y - 100, ws.y + 100)), max_size=2))
    objects = draw(st.lists(st.builds(MovableObject, st.just(100), st.integers(ws.x + 60, ws.x + side // 2 - 60),
                                      st.integers(ws.y - side // 2 + 60, ws.y + side // 2 - 60)), max_size=3))
    return SceneDescription(ws, Agent(agent), draw(pose), obstacles, doors, objects)


@given(scenes())
def test_round_trip(scene):
    assert load_scene(dump_scene(scene)) == scene


def test_with_state_keeps_static_parts(cleanup_scene):
    s = cleanup_scene.with_state(Pose(0, 1000, 90))
    assert s.robot == Pose(0, 1000, 90)
    assert s.obstacles == cleanup_scene.obstacles and s.objects == cleanup_scene.objects
    assert cleanup_scene.reach(1) == 250
