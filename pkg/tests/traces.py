"""Hand-built scene traces for primitive and plan tests."""

from cosmop.logic.ast import Trace
from cosmop.scene import Pose


def make_trace(states, acts):
    """Trace from per-instant ``(Pose, [(x, y, carried), ...])`` states and ``len(states) - 1`` codes.

    The selector at the last instant repeats the previous code (it is never read).
    """
    K = len(states) - 1
    assert len(acts) == K
    ints = {"robot.x": [], "robot.y": [], "robot.alpha": [], "act": list(acts) + [acts[-1] if acts else 0]}
    bools = {}
    n = len(states[0][1])
    for j in range(1, n + 1):
        ints[f"obj[{j}].x"], ints[f"obj[{j}].y"], bools[f"obj[{j}].p"] = [], [], []
    for robot, objs in states:
        ints["robot.x"].append(robot.x)
        ints["robot.y"].append(robot.y)
        ints["robot.alpha"].append(robot.alpha)
        for j, (x, y, p) in enumerate(objs, 1):
            ints[f"obj[{j}].x"].append(x)
            ints[f"obj[{j}].y"].append(y)
            bools[f"obj[{j}].p"].append(p)
    return Trace(K, {k: tuple(v) for k, v in ints.items()}, {k: tuple(v) for k, v in bools.items()})


def initial_objects(scene):
    return [(b.x, b.y, b.carried) for b in scene.objects]


def robot_only(*poses):
    return [(Pose(*p), []) for p in poses]


def corrupted_plans():
    """Three invalid clean-up plans: ``name -> (plan, failing step index, failing check)``."""
    import dataclasses

    from cosmop.logic.ast import TRUE
    from cosmop.planner import plan_from_trace
    from cosmop.tasks import cleanup_scene

    scene = cleanup_scene()
    objs = initial_objects(scene)
    out = {}
    # GoTo from the left room straight through the long wall
    teleport = make_trace([(Pose(-2000, 0, 0), objs), (Pose(-2000, -500, 0), objs), (Pose(0, -500, 0), objs)], [0, 0])
    out["wall teleport"] = (plan_from_trace(teleport, scene, TRUE), 1, "chain:GoTo")
    # PickUp_1 while object 2 is still carried
    carrying = scene.with_state(Pose(1000, -1000, 0), [scene.objects[0],
                                                       dataclasses.replace(scene.objects[1], carried=True)])
    before = [(1900, -1000, False), (2000, -1000, True)]
    after = [(1900, -1000, True), (2000, -1000, False)]
    double = make_trace([(Pose(1000, -1000, 0), before), (Pose(1650, -1000, 0), before),
                         (Pose(1650, -1000, 0), after)], [0, 4])
    out["double-carry PickUp"] = (plan_from_trace(double, carrying, TRUE), 1, "chain:PickUp")
    # Push_1 started facing 90 degrees instead of 0
    wrong = make_trace([(Pose(-2000, 0, 0), objs), (Pose(-2000, -500, 90), objs), (Pose(-1000, -500, 90), objs)], [0, 1])
    out["Push with wrong heading"] = (plan_from_trace(wrong, scene, TRUE), 1, "chain:Push")
    return out
