"""Room-grid scene generator and solver-time benchmark suites."""

from __future__ import annotations

import csv
import io
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from cosmop.logic.ast import Last, conj
from cosmop.primitives import ROBOT_X, ROBOT_Y
from cosmop.scene import Agent, Door, Obstacle, Pose, SceneDescription, Workspace, validate_scene
from cosmop.smt import Sat, Unsat

AGENT_L = 400
DOOR_OFFSET = (AGENT_L + 200) // 2  # door poses sit this far either side of the wall

SUITES = {
    "size": [(m, 9, 14) for m in (4, 8, 16, 32, 64, 128, 256)],
    "rooms": [(32, r, 50) for r in (9, 25, 49, 81)],
    "k": [(32, 25, k) for k in (26, 32, 38, 44, 50)],
    "complexity": [(32, 9, 14), (32, 16, 20), (32, 25, 26), (32, 36, 32), (32, 49, 38),
                   (32, 64, 44), (32, 81, 50)],
}
CSV_COLUMNS = ("env_m", "rooms", "K", "mean_ms", "std_ms", "sat")


@dataclass(frozen=True)
class BenchScenario:
    env_side_m: int
    rooms: int
    K: int
    repetitions: int = 35

    def __post_init__(self):
        grid_side(self.rooms)
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.K < 1:
            raise ValueError("K must be >= 1")


@dataclass(frozen=True)
class BenchRow:
    scenario: BenchScenario
    mean_ms: float
    std_ms: float
    sat: bool
    verdict: str = "sat"
    times_ms: tuple = field(default=(), compare=False)  # per repetition, encode + solve


def grid_side(rooms: int) -> int:
    n = math.isqrt(rooms)
    if n * n != rooms or n < 2:
        raise ValueError(f"rooms must be a perfect square n*n with n >= 2, got {rooms}")
    return n


def _cuts(lo, length, n):
    return [lo + round(i * length / n) for i in range(n + 1)]


def make_rooms_scene(env_side_m: int, rooms: int, sealed_goal: bool = False):
    """``n x n`` rooms with one door per shared wall; returns ``(scene, goal)``.

    Walls are zero-thickness segments.  The robot starts at the centre of
    the lower-left room and must finish inside the upper-right one.  With
    ``sealed_goal`` the doors into the goal room are left out.
    """
    n = grid_side(rooms)
    L = int(env_side_m) * 1000
    lo = -L // 2
    xs = _cuts(lo, L, n)
    if min(b - a for a, b in zip(xs, xs[1:])) <= 2 * DOOR_OFFSET + AGENT_L:
        raise ValueError(f"{env_side_m} m is too small for {rooms} rooms")
    obstacles, doors = [], []
    goal_cell = (n - 1, n - 1)
    for i in range(1, n):  # vertical walls at x = xs[i] between columns i-1 and i
        w = xs[i]
        for row in range(n):
            obstacles.append(Obstacle(w, xs[row], w, xs[row + 1]))
            if sealed_goal and (i, row) == goal_cell:
                continue
            my = (xs[row] + xs[row + 1]) // 2
            doors.append(Door(Pose(w - DOOR_OFFSET, my, 0), Pose(w + DOOR_OFFSET, my, 180)))
    for j in range(1, n):  # horizontal walls at y = xs[j] between rows j-1 and j
        w = xs[j]
        for col in range(n):
            obstacles.append(Obstacle(xs[col], w, xs[col + 1], w))
            if sealed_goal and (col, j) == goal_cell:
                continue
            mx = (xs[col] + xs[col + 1]) // 2
            doors.append(Door(Pose(mx, w - DOOR_OFFSET, 90), Pose(mx, w + DOOR_OFFSET, 270)))
    start = Pose((xs[0] + xs[1]) // 2, (xs[0] + xs[1]) // 2, 0)
    scene = validate_scene(SceneDescription(Workspace(0, 0, L), Agent(AGENT_L), start, obstacles, doors))
    h = AGENT_L // 2
    gx0, gx1 = xs[n - 1] + h, xs[n] - h
    goal = Last(conj(ROBOT_X.ge(gx0), ROBOT_X.le(gx1), ROBOT_Y.ge(gx0), ROBOT_Y.le(gx1)))
    return scene, goal


def run_scenario(sc: BenchScenario, timeout_ms=120_000, config=None) -> BenchRow:
    return run_scenarios([sc], timeout_ms, config)[0]


def run_scenarios(scenarios, timeout_ms=120_000, config=None) -> list[BenchRow]:
    """Benchmark rows with their repetitions interleaved round-robin.

    Repetition ``r`` of every row runs before repetition ``r + 1`` of any
    row, so slow drift in machine load is spread over all rows instead of
    biasing whichever row happened to run during it.  A row stops at its
    first non-Sat verdict.
    """
    from cosmop.planner import solve_at

    problems = [make_rooms_scene(sc.env_side_m, sc.rooms) for sc in scenarios]
    times = [[] for _ in scenarios]
    verdicts = ["sat"] * len(scenarios)
    for rep in range(max((sc.repetitions for sc in scenarios), default=0)):
        for i, sc in enumerate(scenarios):
            if rep >= sc.repetitions or verdicts[i] != "sat":
                continue
            scene, goal = problems[i]
            # a different solver seed per repetition: the mean estimates the
            # solver's expected time rather than the luck of one seed
            out = solve_at(scene, goal, sc.K, timeout_ms, config, seed=rep)
            times[i].append(out.encode_ms + out.solve_ms)
            if not isinstance(out.result, Sat):
                verdicts[i] = "unsat" if isinstance(out.result, Unsat) else "timeout"
    rows = []
    for sc, t, verdict in zip(scenarios, times, verdicts):
        std = statistics.stdev(t) if len(t) > 1 else 0.0
        rows.append(BenchRow(sc, statistics.fmean(t), std, verdict == "sat", verdict, tuple(t)))
    return rows


def run_suite(name: str, reps: int = 35, jobs: int = 1, timeout_ms=120_000, config=None) -> list[BenchRow]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    scenarios = [BenchScenario(m, r, k, reps) for m, r, k in SUITES[name]]
    if jobs <= 1:
        return run_scenarios(scenarios, timeout_ms, config)
    # each row owns its solver processes, so threads only wait on subprocesses
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda s: run_scenario(s, timeout_ms, config), scenarios))


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        s = r.scenario
        w.writerow([s.env_side_m, s.rooms, s.K, f"{r.mean_ms:.3f}", f"{r.std_ms:.3f}", str(r.sat).lower()])
    return buf.getvalue()


def format_table(rows) -> str:
    head = f"{'env (m)':>8} {'rooms':>6} {'K':>4} {'mean (ms)':>10} {'std (ms)':>9}  sat"
    lines = [head, "-" * len(head)]
    for r in rows:
        s = r.scenario
        flag = "yes" if r.sat else f"NO ({r.verdict})"
        lines.append(f"{s.env_side_m:>8} {s.rooms:>6} {s.K:>4} {r.mean_ms:>10.1f} {r.std_ms:>9.1f}  {flag}")
    return "\n".join(lines)
