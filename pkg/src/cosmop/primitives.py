"""Constraint formulas for the GoTo, Push, PickUp and Leave motion primitives.

``act`` at instant k names the primitive executed between states k and
k+1.  Every per-step constraint is wrapped in :func:`steps`, so it is
only asserted at instants that have a successor and next-state terms
never leave the trace.
"""

from __future__ import annotations

from dataclasses import dataclass

from cosmop.logic.ast import (
    Always, Atom, Formula, Implies, Max, Min, Next, Not, Var, conj, disj, steps,
)
from cosmop.scene import Rect, SceneDescription, merge_collinear

ROBOT_X, ROBOT_Y, ROBOT_A = Var("robot.x"), Var("robot.y"), Var("robot.alpha")
ACT = Var("act")
KINDS = ("GoTo", "Push", "PickUp", "Leave")


def obj_x(j):
    return Var(f"obj[{j}].x")


def obj_y(j):
    return Var(f"obj[{j}].y")


def carried(j):
    return Atom(f"obj[{j}].p")


def state_symbols(scene: SceneDescription):
    """Integer and boolean state symbols of a scene, in a stable order."""
    ints = ["robot.x", "robot.y", "robot.alpha", "act"]
    bools = []
    for j in range(1, len(scene.objects) + 1):
        ints += [f"obj[{j}].x", f"obj[{j}].y"]
        bools.append(f"obj[{j}].p")
    return ints, bools


@dataclass(frozen=True)
class PrimitiveId:
    kind: str
    index: int | None = None  # 1-based door/object index; None for GoTo

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown primitive {self.kind!r}")
        if (self.kind == "GoTo") != (self.index is None):
            raise ValueError("GoTo takes no index; Push/PickUp/Leave require one")

    def __str__(self):
        return self.kind if self.index is None else f"{self.kind}_{self.index}"


class PrimitiveCodec:
    """Dense integer codes: 0 GoTo, then Push_j, PickUp_j, Leave_j blocks."""

    def __init__(self, n_doors: int, n_objects: int):
        self.n_doors = n_doors
        self.n_objects = n_objects

    @classmethod
    def for_scene(cls, scene: SceneDescription):
        return cls(len(scene.doors), len(scene.objects))

    @property
    def size(self):
        return 1 + self.n_doors + 2 * self.n_objects

    def code(self, prim: PrimitiveId) -> int:
        if prim.kind == "GoTo":
            return 0
        limit = self.n_doors if prim.kind == "Push" else self.n_objects
        if not 1 <= prim.index <= limit:
            raise ValueError(f"{prim} out of range for this scene")
        if prim.kind == "Push":
            return prim.index
        if prim.kind == "PickUp":
            return self.n_doors + prim.index
        return self.n_doors + self.n_objects + prim.index

    def decode(self, code: int) -> PrimitiveId:
        if code == 0:
            return PrimitiveId("GoTo")
        if 1 <= code <= self.n_doors:
            return PrimitiveId("Push", code)
        code -= self.n_doors
        if 1 <= code <= self.n_objects:
            return PrimitiveId("PickUp", code)
        code -= self.n_objects
        if 1 <= code <= self.n_objects:
            return PrimitiveId("Leave", code)
        raise ValueError(f"primitive code out of range: {code}")

    def all(self):
        return [self.decode(c) for c in range(self.size)]


def iff(a: Formula, b: Formula) -> Formula:
    return disj(conj(a, b), conj(Not(a), Not(b)))


def _act_is(codec, kind, index=None):
    return ACT.eq(codec.code(PrimitiveId(kind, index)))


def _p_static(scene):
    return conj(*(iff(Next(carried(j)), carried(j)) for j in range(1, len(scene.objects) + 1)))


def _r_static():
    return conj(ROBOT_X.next.eq(ROBOT_X), ROBOT_Y.next.eq(ROBOT_Y), ROBOT_A.next.eq(ROBOT_A))


# ------------------------------------------------------------------ GoTo

def goto_clearance_obstacle(half, o):
    """Four-way separation of the swept robot box from obstacle ``o`` (an obstacle or a box)."""
    r = o if isinstance(o, Rect) else o.rect
    return disj(
        Max(ROBOT_X.next, ROBOT_X).le(r.xmin - half),
        Min(ROBOT_X.next, ROBOT_X).ge(r.xmax + half),
        Max(ROBOT_Y.next, ROBOT_Y).le(r.ymin - half),
        Min(ROBOT_Y.next, ROBOT_Y).ge(r.ymax + half),
    )


def goto_clearance_object(reach, j):
    return disj(
        Max(ROBOT_X.next, ROBOT_X).le(obj_x(j) - reach),
        Min(ROBOT_X.next, ROBOT_X).ge(obj_x(j) + reach),
        Max(ROBOT_Y.next, ROBOT_Y).le(obj_y(j) - reach),
        Min(ROBOT_Y.next, ROBOT_Y).ge(obj_y(j) + reach),
    )


def build_goto(scene: SceneDescription) -> Formula:
    codec = PrimitiveCodec.for_scene(scene)
    go = _act_is(codec, "GoTo")
    half = scene.agent.l // 2
    xlo, xhi, ylo, yhi = scene.workspace.robot_bounds(scene.agent.l)
    parts = [steps(Implies(go, conj(
        _p_static(scene),
        ROBOT_X.next.ge(xlo), ROBOT_X.next.le(xhi),
        ROBOT_Y.next.ge(ylo), ROBOT_Y.next.le(yhi),
    )))]
    for r in merge_collinear(scene.obstacles):
        parts.append(steps(Implies(go, goto_clearance_obstacle(half, r))))
    for j in range(1, len(scene.objects) + 1):
        parts.append(steps(Implies(conj(go, Not(carried(j))), goto_clearance_object(scene.reach(j), j))))
    return conj(*parts)


# ------------------------------------------------------------------ Push

def build_push(scene: SceneDescription) -> Formula:
    codec = PrimitiveCodec.for_scene(scene)
    parts = []
    for j, d in enumerate(scene.doors, 1):
        def through(a, b):
            return conj(ROBOT_X.eq(a.x), ROBOT_Y.eq(a.y), ROBOT_A.eq(a.alpha),
                        ROBOT_X.next.eq(b.x), ROBOT_Y.next.eq(b.y))
        parts.append(steps(Implies(_act_is(codec, "Push", j),
                                   conj(_p_static(scene), disj(through(d.q1, d.q2), through(d.q2, d.q1))))))
    return conj(*parts)


# ------------------------------------------------------------------ PickUp / Leave

def build_pickup(scene: SceneDescription) -> Formula:
    codec = PrimitiveCodec.for_scene(scene)
    n = len(scene.objects)
    parts = []
    for j in range(1, n + 1):
        carry_next = conj(*(conj(Not(carried(l)), Next(carried(l)) if l == j else Not(Next(carried(l))))
                            for l in range(1, n + 1)))
        in_front = conj(ROBOT_A.eq(0), ROBOT_Y.eq(obj_y(j)), ROBOT_X.eq(obj_x(j) - scene.reach(j)))
        parts.append(steps(Implies(_act_is(codec, "PickUp", j), conj(carry_next, _r_static(), in_front))))
    return conj(*parts)


def build_leave(scene: SceneDescription) -> Formula:
    codec = PrimitiveCodec.for_scene(scene)
    n = len(scene.objects)
    parts = []
    for j in range(1, n + 1):
        leave = _act_is(codec, "Leave", j)
        drop = conj(*(conj(carried(l) if l == j else Not(carried(l)), Not(Next(carried(l))))
                      for l in range(1, n + 1)))
        placed = conj(ROBOT_A.eq(0), obj_y(j).next.eq(ROBOT_Y), obj_x(j).next.eq(ROBOT_X + scene.reach(j)))
        parts.append(steps(Implies(leave, conj(drop, _r_static(), placed))))

        bj = scene.objects[j - 1]
        for l in range(1, n + 1):
            if l == j:
                continue
            gap = (bj.l + scene.objects[l - 1].l) // 2
            apart = disj(
                obj_y(j).next.le(obj_y(l).next - gap),
                obj_y(j).next.ge(obj_y(l).next + gap),
                obj_x(j).next.le(obj_x(l).next - gap),
                obj_x(j).next.ge(obj_x(l).next + gap),
            )
            parts.append(steps(Implies(conj(leave, Not(carried(l))), apart)))

        half = bj.l // 2
        for r in merge_collinear(scene.obstacles):
            clear = disj(
                obj_x(j).next.le(r.xmin - half),
                obj_x(j).next.ge(r.xmax + half),
                obj_y(j).next.le(r.ymin - half),
                obj_y(j).next.ge(r.ymax + half),
            )
            parts.append(steps(Implies(leave, clear)))
    return conj(*parts)


def build_carry(scene: SceneDescription) -> Formula:
    codec = PrimitiveCodec.for_scene(scene)
    parts = []
    for j in range(1, len(scene.objects) + 1):
        frozen = conj(obj_x(j).next.eq(obj_x(j)), obj_y(j).next.eq(obj_y(j)))
        parts.append(steps(Implies(Not(_act_is(codec, "Leave", j)), frozen)))
    return conj(*parts)


# ------------------------------------------------------------------ composition

def build_initial(scene: SceneDescription) -> Formula:
    """Instant-0 equalities for the robot pose and every object state."""
    r = scene.robot
    parts = [ROBOT_X.eq(r.x), ROBOT_Y.eq(r.y), ROBOT_A.eq(r.alpha)]
    for j, b in enumerate(scene.objects, 1):
        parts += [obj_x(j).eq(b.x), obj_y(j).eq(b.y), carried(j) if b.carried else Not(carried(j))]
    return conj(*parts)


def build_domains(scene: SceneDescription) -> Formula:
    """Primitive selector within its code range, headings within [0, 360)."""
    codec = PrimitiveCodec.for_scene(scene)
    return Always(conj(ACT.ge(0), ACT.le(codec.size - 1), ROBOT_A.ge(0), ROBOT_A.le(359)))


def build_primitive_spec(scene: SceneDescription) -> Formula:
    return conj(
        build_initial(scene),
        build_domains(scene),
        build_goto(scene),
        build_push(scene),
        build_pickup(scene),
        build_leave(scene),
        build_carry(scene),
    )


__all__ = [
    "ACT", "PrimitiveCodec", "PrimitiveId", "ROBOT_A", "ROBOT_X", "ROBOT_Y",
    "build_carry", "build_domains", "build_goto", "build_initial", "build_leave",
    "build_pickup", "build_primitive_spec", "build_push", "carried", "iff", "obj_x", "obj_y",
    "state_symbols",
]
