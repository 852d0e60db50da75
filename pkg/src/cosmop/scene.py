"""Static scene description: obstacles, doors, agent, movable objects, workspace.

All coordinates are integer millimetres and angles integer degrees in
``[0, 360)``.  Side lengths must be even so every half-extent used by the
constraint generator stays integral.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from cosmop.errors import SceneError


class Rect(NamedTuple):
    """Closed axis-aligned box ``[xmin, xmax] x [ymin, ymax]``."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    @classmethod
    def around(cls, x, y, half):
        return cls(x - half, y - half, x + half, y + half)

    def inflate(self, margin):
        return Rect(self.xmin - margin, self.ymin - margin, self.xmax + margin, self.ymax + margin)


def aabb_disjoint(a: Rect, b: Rect) -> bool:
    """True iff the closed boxes are separated along at least one axis.

    Touching boundaries count as disjoint.
    """
    return a.xmax <= b.xmin or b.xmax <= a.xmin or a.ymax <= b.ymin or b.ymax <= a.ymin


@dataclass(frozen=True)
class Pose:
    x: int
    y: int
    alpha: int = 0


@dataclass(frozen=True)
class Obstacle:
    xi: int
    yi: int
    xf: int
    yf: int

    @property
    def rect(self) -> Rect:
        return Rect(min(self.xi, self.xf), min(self.yi, self.yf), max(self.xi, self.xf), max(self.yi, self.yf))


@dataclass(frozen=True)
class Door:
    q1: Pose
    q2: Pose


@dataclass(frozen=True)
class Agent:
    l: int


@dataclass(frozen=True)
class MovableObject:
    l: int
    x: int
    y: int
    carried: bool = False

    def rect(self) -> Rect:
        return Rect.around(self.x, self.y, self.l // 2)


@dataclass(frozen=True)
class Workspace:
    x: int
    y: int
    l: int

    def robot_bounds(self, agent_l):
        """Range of legal robot centres ``(xlo, xhi, ylo, yhi)``."""
        h = self.l // 2 - agent_l // 2
        return self.x - h, self.x + h, self.y - h, self.y + h

    def contains(self, rect: Rect) -> bool:
        h = self.l / 2
        return (self.x - h <= rect.xmin and rect.xmax <= self.x + h
                and self.y - h <= rect.ymin and rect.ymax <= self.y + h)


@dataclass(frozen=True)
class SceneDescription:
    workspace: Workspace
    agent: Agent
    robot: Pose
    obstacles: tuple[Obstacle, ...] = ()
    doors: tuple[Door, ...] = ()
    objects: tuple[MovableObject, ...] = field(default_factory=tuple)

    def __post_init__(self):
        # accept lists from callers, store tuples
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(self, "doors", tuple(self.doors))
        object.__setattr__(self, "objects", tuple(self.objects))

    def robot_rect(self, x, y) -> Rect:
        return Rect.around(x, y, self.agent.l / 2)

    def reach(self, j):
        """Centre distance between robot and object ``j`` (1-based) when touching."""
        return (self.objects[j - 1].l + self.agent.l) // 2

    def with_state(self, robot: Pose, objects=None, obstacles=None) -> SceneDescription:
        """Copy of the scene re-rooted at a new robot pose and object states."""
        return SceneDescription(
            workspace=self.workspace,
            agent=self.agent,
            robot=robot,
            obstacles=self.obstacles if obstacles is None else obstacles,
            doors=self.doors,
            objects=self.objects if objects is None else objects,
        )


def merge_collinear(obstacles) -> list[Rect]:
    """Boxes of the obstacles with touching or overlapping collinear segments fused.

    Only zero-thickness segments (horizontal or vertical) are merged.  For
    any box of positive width and height, being disjoint from every input
    box is equivalent to being disjoint from every merged box.
    """
    rects = [o.rect for o in obstacles]
    out, rows = [], {}
    for r in rects:
        if r.ymin == r.ymax and r.xmin < r.xmax:
            rows.setdefault(("h", r.ymin), []).append((r.xmin, r.xmax))
        elif r.xmin == r.xmax and r.ymin < r.ymax:
            rows.setdefault(("v", r.xmin), []).append((r.ymin, r.ymax))
        else:
            out.append(r)
    for (axis, c), spans in sorted(rows.items()):
        spans.sort()
        lo, hi = spans[0]
        merged = []
        for a, b in spans[1:]:
            if a <= hi:
                hi = max(hi, b)
            else:
                merged.append((lo, hi))
                lo, hi = a, b
        merged.append((lo, hi))
        for a, b in merged:
            out.append(Rect(a, c, b, c) if axis == "h" else Rect(c, a, c, b))
    return out


# ---------------------------------------------------------------- validation

def _int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SceneError(f"{where}: expected integer, got {value!r}")
    return value


def _even_positive(value, where):
    _int(value, where)
    if value <= 0:
        raise SceneError(f"{where}: side length must be > 0")
    if value % 2:
        raise SceneError(f"{where}: side length must be even (half-extents are integral)")
    return value


def _angle(value, where):
    _int(value, where)
    if not 0 <= value < 360:
        raise SceneError(f"{where}: angle must lie in [0, 360)")
    return value


def _pose_inside(ws: Workspace, pose: Pose, agent_l):
    xlo, xhi, ylo, yhi = ws.robot_bounds(agent_l)
    return xlo <= pose.x <= xhi and ylo <= pose.y <= yhi


def validate_scene(scene: SceneDescription) -> SceneDescription:
    ws, agent = scene.workspace, scene.agent
    _even_positive(agent.l, "agent.l")
    _even_positive(ws.l, "workspace.l")
    _int(ws.x, "workspace.x")
    _int(ws.y, "workspace.y")
    if ws.l <= 2 * agent.l:
        raise SceneError("workspace.l must exceed 2 * agent.l")

    for name, pose in [("robot", scene.robot)]:
        _int(pose.x, f"{name}.x")
        _int(pose.y, f"{name}.y")
        _angle(pose.alpha, f"{name}.alpha")
    if not _pose_inside(ws, scene.robot, agent.l):
        raise SceneError("robot initial pose lies outside the workspace (inflated by agent.l/2)")

    for i, o in enumerate(scene.obstacles, 1):
        for attr in ("xi", "yi", "xf", "yf"):
            _int(getattr(o, attr), f"obstacles[{i}].{attr}")

    for i, d in enumerate(scene.doors, 1):
        for tag, q in (("q1", d.q1), ("q2", d.q2)):
            _int(q.x, f"doors[{i}].{tag}.x")
            _int(q.y, f"doors[{i}].{tag}.y")
            _angle(q.alpha, f"doors[{i}].{tag}.alpha")
            if not _pose_inside(ws, q, agent.l):
                raise SceneError(f"doors[{i}].{tag} lies outside the workspace")
        if d.q1 == d.q2:
            raise SceneError(f"doors[{i}]: q1 and q2 must differ")

    for i, b in enumerate(scene.objects, 1):
        _even_positive(b.l, f"objects[{i}].l")
        _int(b.x, f"objects[{i}].x")
        _int(b.y, f"objects[{i}].y")
        if not isinstance(b.carried, bool):
            raise SceneError(f"objects[{i}].carried must be a boolean")
        if not ws.contains(b.rect()):
            raise SceneError(f"objects[{i}] lies outside the workspace")
        for k, o in enumerate(scene.obstacles, 1):
            if not aabb_disjoint(b.rect(), o.rect):
                raise SceneError(f"objects[{i}] overlaps obstacles[{k}]")
    if sum(b.carried for b in scene.objects) > 1:
        raise SceneError("at most one object may be carried")
    return scene


# ---------------------------------------------------------------- (de)serialization

def _pose_from(d, where):
    try:
        return Pose(d["x"], d["y"], d.get("alpha", 0))
    except (KeyError, TypeError) as exc:
        raise SceneError(f"{where}: malformed pose") from exc


def scene_from_dict(data) -> SceneDescription:
    if not isinstance(data, dict):
        raise SceneError("scene must be a JSON object")
    try:
        ws = data["workspace"]
        scene = SceneDescription(
            workspace=Workspace(ws["x"], ws["y"], ws["l"]),
            agent=Agent(data["agent"]["l"]),
            robot=_pose_from(data["robot"], "robot"),
            obstacles=[Obstacle(o["xi"], o["yi"], o["xf"], o["yf"]) for o in data.get("obstacles", [])],
            doors=[Door(_pose_from(d["q1"], "door.q1"), _pose_from(d["q2"], "door.q2"))
                   for d in data.get("doors", [])],
            objects=[MovableObject(b["l"], b["x"], b["y"], b.get("carried", False))
                     for b in data.get("objects", [])],
        )
    except (KeyError, TypeError) as exc:
        raise SceneError(f"missing or malformed field: {exc}") from exc
    return validate_scene(scene)


def scene_to_dict(scene: SceneDescription) -> dict:
    def pose(q):
        return {"x": q.x, "y": q.y, "alpha": q.alpha}

    return {
        "workspace": {"x": scene.workspace.x, "y": scene.workspace.y, "l": scene.workspace.l},
        "agent": {"l": scene.agent.l},
        "robot": pose(scene.robot),
        "obstacles": [{"xi": o.xi, "yi": o.yi, "xf": o.xf, "yf": o.yf} for o in scene.obstacles],
        "doors": [{"q1": pose(d.q1), "q2": pose(d.q2)} for d in scene.doors],
        "objects": [{"l": b.l, "x": b.x, "y": b.y, "carried": b.carried} for b in scene.objects],
    }


def load_scene(source) -> SceneDescription:
    """Parse and validate a scene from a binary/text stream, bytes, str or path."""
    if isinstance(source, Path):
        raw = source.read_bytes()
    elif isinstance(source, (bytes, bytearray, str)):
        raw = source
    elif isinstance(source, io.IOBase) or hasattr(source, "read"):
        raw = source.read()
    else:
        raise TypeError(f"cannot read scene from {type(source).__name__}")
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SceneError(f"scene parse error: {exc}") from exc
    return scene_from_dict(data)


def dump_scene(scene: SceneDescription) -> str:
    return json.dumps(scene_to_dict(scene), indent=2)


def example_scene() -> SceneDescription:
    """Two-wall, three-door clean-up layout with two small objects."""
    return validate_scene(SceneDescription(
        workspace=Workspace(0, 0, 5000),
        agent=Agent(400),
        robot=Pose(-2000, 0, 0),
        obstacles=[Obstacle(-1500, -2500, -1500, 2500), Obstacle(-1500, 0, 2500, 0)],
        doors=[
            Door(Pose(-2000, -500, 0), Pose(-1000, -500, 180)),
            Door(Pose(-2000, 1000, 0), Pose(-1000, 1000, 180)),
            Door(Pose(-1000, 500, 270), Pose(-1000, -500, 90)),
        ],
        objects=[MovableObject(100, 1900, -1000), MovableObject(100, 2000, -1000)],
    ))
