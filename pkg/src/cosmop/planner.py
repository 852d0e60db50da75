"""Plan synthesis, extraction and independent validation."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field

from cosmop.errors import Infeasible, PlanningError, SolveTimeout, ValidationFailure
from cosmop.logic.ast import Formula, Trace, conj
from cosmop.logic.evaluate import evaluate
from cosmop.logic.parser import format_formula, parse_formula
from cosmop.primitives import KINDS, PrimitiveCodec, PrimitiveId, build_primitive_spec, state_symbols
from cosmop.scene import (
    MovableObject, Pose, Rect, SceneDescription, aabb_disjoint, scene_from_dict, scene_to_dict,
    validate_scene,
)
from cosmop.smt import EncodingContext, Sat, Unsat, decode_model, encode, open_session
from cosmop.smt.backend import first_violated

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PlanStep:
    primitive: PrimitiveId
    waypoint: Pose


@dataclass(frozen=True)
class Plan:
    steps: tuple[PlanStep, ...]
    full_trace: Trace
    scene: SceneDescription
    goal: Formula
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def K(self):
        return len(self.steps)


@dataclass(frozen=True)
class PlanRequest:
    scene: SceneDescription
    goal: Formula
    K: int | tuple[int, int]
    timeout_ms: int = 120_000

    def __post_init__(self):
        lo, hi = self.horizon_range()
        if lo < 1 or lo > hi:
            raise ValueError(f"invalid horizon {self.K!r}: need 1 <= k_min <= k_max")

    def horizon_range(self):
        if isinstance(self.K, int):
            return self.K, self.K
        lo, hi = self.K
        return lo, hi

    def horizons(self):
        lo, hi = self.horizon_range()
        return range(lo, hi + 1)


# ------------------------------------------------------------------ solving

@dataclass
class SolveOutcome:
    result: object
    ctx: EncodingContext
    encode_ms: float
    solve_ms: float


def solve_at(scene, goal, K, timeout_ms=120_000, config=None, spec=None, seed=None) -> SolveOutcome:
    """Encode ``goal`` and the primitive constraints at horizon ``K`` and solve once."""
    t0 = time.perf_counter()
    spec = build_primitive_spec(scene) if spec is None else spec
    ctx = EncodingContext(K)
    ints, bools = state_symbols(scene)
    for s in ints:
        ctx.declare_symbol(s, "Int")
    for s in bools:
        ctx.declare_symbol(s, "Bool")
    aset = encode(conj(goal, spec), K, ctx)
    session = open_session(aset, config=config, seed=seed)
    t1 = time.perf_counter()
    result = session.check(timeout_ms, verify=False)
    t2 = time.perf_counter()
    if isinstance(result, Sat) and first_violated(aset.assertions, result.model) is not None:
        raise PlanningError("solver model violates its own assertions")
    return SolveOutcome(result, ctx, (t1 - t0) * 1e3, (t2 - t1) * 1e3)


def synthesize(req: PlanRequest, config=None) -> Plan:
    """First satisfiable horizon in ``req`` as a validated plan.

    Raises :class:`Infeasible` when every horizon is unsatisfiable and
    :class:`SolveTimeout` when the solver gives no verdict.
    """
    spec = build_primitive_spec(req.scene)
    for K in req.horizons():
        out = solve_at(req.scene, req.goal, K, req.timeout_ms, config, spec)
        log.info("K=%d: %s (encode %.1f ms, solve %.1f ms)", K, type(out.result).__name__,
                 out.encode_ms, out.solve_ms)
        if isinstance(out.result, Unsat):
            continue
        if not isinstance(out.result, Sat):
            raise SolveTimeout(K, getattr(out.result, "reason", "timeout"))
        trace = decode_model(out.result.model, out.ctx)
        plan = plan_from_trace(trace, req.scene, req.goal)
        plan.stats.update(encode_ms=out.encode_ms, solve_ms=out.solve_ms)
        report = validate_plan(plan, req.scene, req.goal)
        if not report.ok:
            raise ValidationFailure(report)
        return plan
    raise Infeasible(req.horizons())


def plan_from_trace(trace: Trace, scene: SceneDescription, goal: Formula) -> Plan:
    codec = PrimitiveCodec.for_scene(scene)
    xs, ys, al = (trace.int_vars[s] for s in ("robot.x", "robot.y", "robot.alpha"))
    act = trace.int_vars["act"]
    steps = tuple(
        PlanStep(codec.decode(act[k]), Pose(xs[k + 1], ys[k + 1], al[k + 1]))
        for k in range(trace.K)
    )
    return Plan(steps, trace, scene, goal)


# ------------------------------------------------------------------ validation

@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    step: int | None = None
    detail: str = ""


@dataclass
class PlanReport:
    checks: list

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def first_failing_step(self):
        steps = [c.step for c in self.failures() if c.step is not None]
        return min(steps) if steps else None

    def summary(self):
        bad = self.failures()
        if not bad:
            return "all checks passed"
        return "; ".join(f"{c.name}@{c.step}: {c.detail}" for c in bad)


def _state(trace, scene, k):
    robot = Pose(trace.int_vars["robot.x"][k], trace.int_vars["robot.y"][k], trace.int_vars["robot.alpha"][k])
    objs = [
        (trace.int_vars[f"obj[{j}].x"][k], trace.int_vars[f"obj[{j}].y"][k], trace.bool_vars[f"obj[{j}].p"][k])
        for j in range(1, len(scene.objects) + 1)
    ]
    return robot, objs


def step_violations(scene: SceneDescription, trace: Trace, k: int) -> list[str]:
    """Pre/postconditions of the primitive executed from instant k to k+1.

    Recomputed from scene geometry, independently of the formula builders.
    """
    codec = PrimitiveCodec.for_scene(scene)
    try:
        prim = codec.decode(trace.int_vars["act"][k])
    except ValueError as exc:
        return [str(exc)]
    r0, b0 = _state(trace, scene, k)
    r1, b1 = _state(trace, scene, k + 1)
    half = scene.agent.l / 2
    errs = []

    def carrying(objs):
        return {j for j, (_, _, p) in enumerate(objs, 1) if p}

    for j, ((x0, y0, _), (x1, y1, _)) in enumerate(zip(b0, b1), 1):
        if (x0, y0) != (x1, y1) and prim != PrimitiveId("Leave", j):
            errs.append(f"object {j} moved without Leave_{j}")

    if prim.kind in ("GoTo", "Push") and carrying(b0) != carrying(b1):
        errs.append("carry flags changed")

    if prim.kind == "GoTo":
        xlo, xhi, ylo, yhi = scene.workspace.robot_bounds(scene.agent.l)
        if not (xlo <= r1.x <= xhi and ylo <= r1.y <= yhi):
            errs.append("waypoint outside workspace")
        corridor = Rect(min(r0.x, r1.x), min(r0.y, r1.y), max(r0.x, r1.x), max(r0.y, r1.y)).inflate(half)
        for i, o in enumerate(scene.obstacles, 1):
            if not aabb_disjoint(corridor, o.rect):
                errs.append(f"corridor intersects obstacle {i}")
        for j, (bx, by, p) in enumerate(b0, 1):
            if not p and not aabb_disjoint(corridor, Rect.around(bx, by, scene.objects[j - 1].l / 2)):
                errs.append(f"corridor intersects object {j}")
    elif prim.kind == "Push":
        d = scene.doors[prim.index - 1]
        fwd = (r0 == d.q1 and (r1.x, r1.y) == (d.q2.x, d.q2.y))
        bwd = (r0 == d.q2 and (r1.x, r1.y) == (d.q1.x, d.q1.y))
        if not (fwd or bwd):
            errs.append(f"push {prim.index} does not start at a door pose or end at the opposite pose")
    else:
        j = prim.index
        if r0 != r1:
            errs.append("robot moved during PickUp/Leave")
        if r0.alpha != 0:
            errs.append("heading must be 0")
        reach = scene.reach(j)
        if prim.kind == "PickUp":
            bx, by, _ = b0[j - 1]
            if carrying(b0):
                errs.append(f"PickUp_{j} while already carrying {sorted(carrying(b0))}")
            if carrying(b1) != {j}:
                errs.append(f"PickUp_{j} must leave exactly object {j} carried")
            if (r0.x, r0.y) != (bx - reach, by):
                errs.append(f"robot not in front of object {j}")
        else:
            if carrying(b0) != {j}:
                errs.append(f"Leave_{j} requires carrying exactly object {j}")
            if carrying(b1):
                errs.append("nothing may be carried after Leave")
            bx, by, _ = b1[j - 1]
            if (bx, by) != (r0.x + reach, r0.y):
                errs.append(f"object {j} not placed in front of robot")
            box = Rect.around(bx, by, scene.objects[j - 1].l / 2)
            for i, o in enumerate(scene.obstacles, 1):
                if not aabb_disjoint(box, o.rect):
                    errs.append(f"object {j} placed over obstacle {i}")
            for l, (lx, ly, lp) in enumerate(b1, 1):
                if l != j and not b0[l - 1][2] and not aabb_disjoint(
                        box, Rect.around(lx, ly, scene.objects[l - 1].l / 2)):
                    errs.append(f"object {j} placed over object {l}")
    return errs


def validate_plan(plan: Plan, scene: SceneDescription | None = None, goal: Formula | None = None) -> PlanReport:
    scene = plan.scene if scene is None else scene
    goal = plan.goal if goal is None else goal
    trace = plan.full_trace
    checks = []

    def formula_check(name, f):
        try:
            ok = evaluate(f, trace, 0)
            checks.append(Check(name, ok, None, "" if ok else "evaluator returned false"))
        except Exception as exc:  # evaluation error is a failed check, not a crash
            checks.append(Check(name, False, None, f"evaluation error: {exc}"))

    formula_check("goal", goal)
    formula_check("primitives", build_primitive_spec(scene))

    for k, step in enumerate(plan.steps):
        r = step.waypoint
        if (r.x, r.y, r.alpha) != tuple(trace.int_vars[s][k + 1] for s in ("robot.x", "robot.y", "robot.alpha")):
            checks.append(Check("waypoint", False, k, "waypoint differs from trace state"))
        errs = step_violations(scene, trace, k)
        checks.append(Check(f"chain:{step.primitive.kind}", not errs, k, "; ".join(errs)))
    return PlanReport(checks)


# ------------------------------------------------------------------ receding horizon

def plan_to_receding_horizon(plan: Plan, current_state, scene_update: SceneDescription | None = None,
                             K=None, timeout_ms=120_000) -> PlanRequest:
    """Fresh request rooted at ``current_state``; the previous plan is discarded.

    ``current_state`` is either a :class:`Pose` (objects keep the states of
    the updated scene) or a ``(Pose, objects)`` pair, with objects given as
    ``(x, y, carried)`` tuples.
    """
    scene = scene_update or plan.scene
    if isinstance(current_state, Pose):
        robot, objects = current_state, scene.objects
    else:
        robot, objs = current_state
        objects = [MovableObject(b.l, int(round(x)), int(round(y)), bool(p))
                   for b, (x, y, p) in zip(scene.objects, objs)]
    robot = Pose(int(round(robot.x)), int(round(robot.y)), int(round(robot.alpha)) % 360)
    new_scene = validate_scene(scene.with_state(robot, objects))
    return PlanRequest(new_scene, plan.goal, plan.K if K is None else K, timeout_ms)


def current_state_of(plan: Plan, k: int):
    """World state (robot pose, object tuples) at instant ``k`` of a plan."""
    return _state(plan.full_trace, plan.scene, k)


# ------------------------------------------------------------------ plan files

def plan_to_json(plan: Plan) -> dict:
    steps = []
    for k, s in enumerate(plan.steps, 1):
        steps.append({
            "k": k,
            "primitive": s.primitive.kind,
            "arg": s.primitive.index,
            "waypoint": {"x": s.waypoint.x, "y": s.waypoint.y, "alpha": s.waypoint.alpha},
        })
    return {
        "K": plan.K,
        "steps": steps,
        "goal": format_formula(plan.goal),
        "scene": scene_to_dict(plan.scene),
        "trace": plan.full_trace.to_dict(),
    }


def dump_plan(plan: Plan) -> str:
    return json.dumps(plan_to_json(plan), indent=1)


def plan_from_json(data: dict, scene: SceneDescription | None = None) -> Plan:
    """Rebuild a plan; ``scene`` overrides the embedded one.

    Raises ``ValueError``/``KeyError`` on malformed input, including unknown
    primitive names.
    """
    if not isinstance(data, dict) or not isinstance(data.get("steps"), list):
        raise ValueError("plan file must be an object with a 'steps' list")
    scene = scene if scene is not None else scene_from_dict(data["scene"])
    steps = []
    for entry in data["steps"]:
        kind = entry["primitive"]
        if kind not in KINDS:
            raise ValueError(f"unknown primitive {kind!r}")
        arg = entry.get("arg")
        if kind != "GoTo" and not isinstance(arg, int):
            raise ValueError(f"{kind} needs an integer 'arg', got {arg!r}")
        prim = PrimitiveId(kind, None if kind == "GoTo" else arg)
        PrimitiveCodec.for_scene(scene).code(prim)
        w = entry["waypoint"]
        steps.append(PlanStep(prim, Pose(int(w["x"]), int(w["y"]), int(w.get("alpha", 0)))))
    trace = Trace.from_dict(data["trace"]) if "trace" in data else None
    goal = parse_formula(data.get("goal", "true"))
    return Plan(tuple(steps), trace, scene, goal)
