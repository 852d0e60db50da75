"""Dynamic Window Approach simulator with a passive-safety runtime monitor.

Units are millimetres, seconds and radians.  Robot and obstacles are
treated as discs; the square robot of side ``l`` is bounded by a disc of
radius ``l / sqrt(2)``.  Obstacles never move faster than ``V``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from cosmop.dwa._accel import load_kernels

POLICIES = ("static", "constant", "adversarial")
TIE_RTOL = 1e-9


@dataclass(frozen=True)
class DwaParams:
    v_max: float = 1000.0
    b: float = 500.0
    a_max: float = 500.0
    eps: float = 0.1
    V: float = 500.0
    w_max: float = math.pi / 2
    alpha_max: float | None = None  # angular acceleration cap; derived from a_max when None
    w_heading: float = 0.3
    w_clearance: float = 0.4
    w_velocity: float = 0.3
    n_v: int = 11
    n_w: int = 15
    t_head: float = 1.0  # look-ahead for the heading score (s)
    t_pred: float = 3.0  # look-ahead for the clearance score (s)
    n_pred: int = 10
    clear_cap: float = 500.0
    v_ref: float = 300.0  # minimum sweep speed for the clearance look-ahead
    goal_tol: float = 25.0
    robot_l: float = 400.0

    def __post_init__(self):
        for name in ("v_max", "b", "a_max", "eps", "w_max", "w_heading", "w_clearance",
                     "w_velocity", "t_head", "t_pred", "clear_cap", "goal_tol", "robot_l"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.V < 0:
            raise ValueError("V must be >= 0")
        if not 0.02 <= self.eps <= 0.5:
            raise ValueError("eps must lie in [0.02, 0.5]")
        if self.b > self.a_max:
            # the braking continuation must lie inside the acceleration window
            raise ValueError("b must not exceed a_max")
        if self.n_v < 2 or self.n_w < 1 or self.n_pred < 1:
            raise ValueError("window resolution too small")

    @property
    def robot_radius(self):
        return self.robot_l / math.sqrt(2.0)

    @property
    def angular_accel(self):
        return self.alpha_max if self.alpha_max is not None else self.a_max / (self.robot_l / 2)

    @classmethod
    def from_config(cls, config: dict | None, **overrides):
        """Build from flat ``dwa.*`` config keys plus explicit overrides."""
        values = {}
        for f in cls.__dataclass_fields__:
            key = f"dwa.{f}"
            if config and key in config:
                values[f] = config[key]
        values.update(overrides)
        return cls(**values)


@dataclass(frozen=True)
class SimState:
    x: float
    y: float
    heading: float
    v: float = 0.0
    w: float = 0.0
    t: float = 0.0


@dataclass
class ObstacleState:
    x: float
    y: float
    vx: float = 0.0
    vy: float = 0.0
    radius: float = 150.0
    policy: str = "static"

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ValueError(f"unknown obstacle policy {self.policy!r}")
        if self.radius < 0:
            raise ValueError("obstacle radius must be >= 0")

    def speed(self):
        return math.hypot(self.vx, self.vy)

    def capped(self, V):
        s = self.speed()
        if self.policy == "static":
            return replace(self, vx=0.0, vy=0.0)
        if s > V:
            k = V / s
            return replace(self, vx=self.vx * k, vy=self.vy * k)
        return replace(self)

    def row(self):
        return (self.x, self.y, self.vx, self.vy, self.radius)


def obstacles_array(obstacles) -> np.ndarray:
    return np.array([o.row() for o in obstacles], dtype=float).reshape(-1, 5)


# ------------------------------------------------------------------ safety

def clearance(state: SimState, obstacle: ObstacleState, params: DwaParams) -> float:
    return math.hypot(state.x - obstacle.x, state.y - obstacle.y) - params.robot_radius - obstacle.radius


def braking_bound(v, params: DwaParams) -> float:
    return v * v / (2 * params.b) + params.V * v / params.b


def filter_margin(v, params: DwaParams) -> float:
    """Clearance the window filter demands before a cycle at speed ``v > v_brake``."""
    p = params
    return braking_bound(v, p) + (p.a_max / p.b + 1) * (p.a_max * p.eps ** 2 / 2 + p.eps * (v + p.V))


def passive_safe(state: SimState, obstacle: ObstacleState, params: DwaParams) -> bool:
    """Robot stopped, or farther than its braking distance plus the obstacle's travel meanwhile."""
    if state.v == 0:
        return True
    return clearance(state, obstacle, params) > braking_bound(state.v, params)


# ------------------------------------------------------------------ window

@dataclass
class Window:
    vs: np.ndarray
    ws: np.ndarray
    admissible: np.ndarray
    heading: np.ndarray
    clearance: np.ndarray
    v_brake: float

    def pairs(self):
        """Admissible ``(v, w)`` pairs."""
        i, j = np.nonzero(self.admissible)
        return [(float(self.vs[a]), float(self.ws[c])) for a, c in zip(i, j)]


def _grid(lo, hi, n, extra=()):
    pts = np.linspace(lo, hi, n) if hi > lo else np.array([lo])
    pts = np.concatenate([pts, [e for e in extra if lo <= e <= hi]])
    return np.unique(pts)


def dynamic_window(state: SimState, obstacles, params: DwaParams, goal=None, kernels=None) -> Window:
    """Acceleration-bounded (v, w) grid with admissibility and objective scores.

    The braking continuation ``max(0, v - b*eps)`` is always sampled and
    always admissible, so the window is never empty.
    """
    kernels = kernels or load_kernels()
    p = params
    v_brake = max(0.0, state.v - p.b * p.eps)
    vlo = max(0.0, state.v - p.a_max * p.eps)
    vhi = min(p.v_max, state.v + p.a_max * p.eps)
    dw = p.angular_accel * p.eps
    wlo = max(-p.w_max, state.w - dw)
    whi = min(p.w_max, state.w + dw)
    vs = _grid(vlo, vhi, p.n_v, (v_brake,))
    ws = _grid(wlo, whi, p.n_w, (0.0,))
    gx, gy = goal if goal is not None else (state.x, state.y)
    adm, heading, clear = kernels.evaluate_window(
        state.x, state.y, state.heading, vs, ws, obstacles_array(obstacles), gx, gy, p.robot_radius,
        p.b, p.a_max, p.eps, p.V, v_brake, p.t_head, p.t_pred, p.n_pred, p.clear_cap, p.v_ref,
        filter_margin(p.a_max * p.eps, p))
    return Window(vs, ws, np.asarray(adm, dtype=bool), np.asarray(heading), np.asarray(clear), v_brake)


def select_velocity(window: Window, state: SimState, goal, params: DwaParams) -> tuple[float, float]:
    """Best admissible pair; near-ties go to lower ``|w|``, then lower ``v``.

    Candidates faster than the speed from which the robot can still stop
    at the goal are skipped unless nothing else is admissible.
    """
    p = params
    total = p.w_heading + p.w_clearance + p.w_velocity
    vv = window.vs[:, None] * np.ones_like(window.ws)[None, :]
    ww = np.ones_like(window.vs)[:, None] * window.ws[None, :]
    score = (p.w_heading * window.heading + p.w_clearance * window.clearance
             + p.w_velocity * vv / p.v_max) / total
    mask = window.admissible.copy()
    if goal is not None:
        d_goal = math.hypot(goal[0] - state.x, goal[1] - state.y)
        cap = math.sqrt(2 * p.b * d_goal)
        capped = mask & ((vv <= cap) | (vv <= window.v_brake))
        if capped.any():
            mask = capped
    score = np.where(mask, score, -np.inf)
    best = score.max()
    near = mask & (score >= best - TIE_RTOL * max(1.0, abs(best)))
    cand = np.argwhere(near)
    i, j = min(cand, key=lambda ij: (abs(ww[ij[0], ij[1]]), vv[ij[0], ij[1]]))
    return float(window.vs[i]), float(window.ws[j])


def step(state: SimState, command, dt: float, kernels=None) -> SimState:
    """Hold ``command = (v, w)`` for ``dt`` seconds along the exact arc."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    kernels = kernels or load_kernels()
    v, w = command
    x, y, th = kernels.arc_step(state.x, state.y, state.heading, v, w, dt)
    return SimState(float(x), float(y), float(th), float(v), float(w), state.t + dt)


def advance_obstacles(obstacles, robot: SimState, dt: float, V: float):
    """Move every obstacle for ``dt``; adversarial ones head straight for the robot."""
    out = []
    for o in obstacles:
        if o.policy == "adversarial":
            dx, dy = robot.x - o.x, robot.y - o.y
            n = math.hypot(dx, dy)
            vx, vy = (V * dx / n, V * dy / n) if n > 0 else (0.0, 0.0)
            o = replace(o, vx=vx, vy=vy)
        o = o.capped(V)
        out.append(replace(o, x=o.x + o.vx * dt, y=o.y + o.vy * dt))
    return out


# ------------------------------------------------------------------ legs

TRACE_COLUMNS = ("t", "x", "y", "heading", "v", "w", "min_dist", "phi_ps")


@dataclass
class LegResult:
    status: str  # reached | stopped_safe | monitor_violation
    state: SimState
    obstacles: list
    rows: list = field(default_factory=list)
    violation_index: int | None = None
    contacts_moving: int = 0
    progress: float = 0.0  # remaining distance to the goal (mm)
    window_empty: int = 0


def _record(state, obstacles, params):
    dists = [clearance(state, o, params) for o in obstacles]
    safe = all(passive_safe(state, o, params) for o in obstacles)
    return (state.t, state.x, state.y, state.heading, state.v, state.w,
            min(dists) if dists else math.inf, safe)


def run_leg(start: SimState, goal, obstacles, params: DwaParams, max_t: float = 60.0,
            goal_heading: float | None = None, kernels=None, rows=None) -> LegResult:
    """Closed-loop DWA from ``start`` to the point ``goal``.

    The monitor evaluates passive safety against every obstacle after each
    control cycle.  Past ``max_t`` the robot brakes to a stop and the leg
    ends as ``stopped_safe``.
    """
    kernels = kernels or load_kernels()
    p = params
    rows = [] if rows is None else rows
    obstacles = [o.capped(p.V) for o in obstacles]
    state = start
    rows.append(_record(state, obstacles, p))
    first = len(rows) - 1
    contacts = 0

    def finish(status, state, violation=None):
        if status == "reached" and goal_heading is not None:
            state = replace(state, heading=goal_heading)
        return LegResult(status, state, obstacles, rows, violation, contacts,
                         math.hypot(goal[0] - state.x, goal[1] - state.y))

    t_end = start.t + max_t
    while True:
        d_goal = math.hypot(goal[0] - state.x, goal[1] - state.y)
        if d_goal <= p.goal_tol and state.v <= p.b * p.eps:
            state = replace(state, v=0.0, w=0.0)
            return finish("reached", state)
        braking = state.t >= t_end
        win = dynamic_window(state, obstacles, p, goal, kernels)
        if not win.admissible.any():  # cannot happen: the braking pair is admissible
            raise AssertionError("dynamic window lost its braking continuation")
        if braking:
            cmd = (win.v_brake, 0.0)
        else:
            cmd = select_velocity(win, state, goal, p)
        robot_prev = state
        state = step(state, cmd, p.eps, kernels)
        obstacles = advance_obstacles(obstacles, robot_prev, p.eps, p.V)
        row = _record(state, obstacles, p)
        rows.append(row)
        if row[6] <= 0 and state.v > 0:
            contacts += 1
        if not row[7]:
            return finish("monitor_violation", state, len(rows) - 1 - first)
        if braking and state.v == 0:
            return finish("stopped_safe", state)


# ------------------------------------------------------------------ plans

@dataclass
class ExecutionResult:
    status: str
    legs: list
    rows: list
    robot_path: list
    obstacle_paths: list
    failed_step: int | None = None

    @property
    def exit_code(self):
        return {"reached": 0, "stopped_safe": 4, "monitor_violation": 5}[self.status]


def execute_plan(plan, obstacles=(), params: DwaParams | None = None, max_t_leg: float = 60.0,
                 kernels=None) -> ExecutionResult:
    """Drive every GoTo step through DWA; doors and grasps are discrete events."""
    params = params or DwaParams(robot_l=plan.scene.agent.l)
    kernels = kernels or load_kernels()
    r = plan.scene.robot
    state = SimState(float(r.x), float(r.y), math.radians(r.alpha))
    obstacles = [o.capped(params.V) for o in obstacles]
    rows, legs = [], []
    robot_path = [(state.x, state.y)]
    obstacle_paths = [[(o.x, o.y)] for o in obstacles]
    for k, st in enumerate(plan.steps):
        wp = st.waypoint
        if st.primitive.kind == "GoTo":
            before = len(rows)
            res = run_leg(state, (wp.x, wp.y), obstacles, params, max_t_leg,
                          goal_heading=math.radians(wp.alpha), kernels=kernels, rows=rows)
            legs.append(res)
            robot_path.extend((row[1], row[2]) for row in rows[before + 1:])
            state, obstacles = res.state, res.obstacles
            for path, o in zip(obstacle_paths, obstacles):
                path.append((o.x, o.y))
            if res.status != "reached":
                return ExecutionResult(res.status, legs, rows, robot_path, obstacle_paths, k)
        else:
            state = SimState(float(wp.x), float(wp.y), math.radians(wp.alpha), 0.0, 0.0, state.t)
            robot_path.append((state.x, state.y))
    return ExecutionResult("reached", legs, rows, robot_path, obstacle_paths)


# ------------------------------------------------------------------ file formats

def load_obstacles(source) -> list[ObstacleState]:
    """Parse a JSON list of ``{x, y, vx, vy, radius, policy}`` objects."""
    data = json.loads(source) if isinstance(source, (str, bytes)) else json.load(source)
    if not isinstance(data, list):
        raise ValueError("obstacle scenario must be a JSON list")
    out = []
    for i, d in enumerate(data):
        try:
            out.append(ObstacleState(float(d["x"]), float(d["y"]), float(d.get("vx", 0.0)),
                                     float(d.get("vy", 0.0)), float(d.get("radius", 150.0)),
                                     d.get("policy", "static")))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"obstacle {i}: malformed entry ({exc})") from exc
    return out


def dump_obstacles(obstacles) -> str:
    return json.dumps([{"x": o.x, "y": o.y, "vx": o.vx, "vy": o.vy, "radius": o.radius,
                        "policy": o.policy} for o in obstacles], indent=1)


def trace_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for r in rows:
        w.writerow([f"{r[0]:.3f}", f"{r[1]:.3f}", f"{r[2]:.3f}", f"{r[3]:.6f}", f"{r[4]:.3f}",
                    f"{r[5]:.6f}", "inf" if math.isinf(r[6]) else f"{r[6]:.3f}", int(r[7])])
    return buf.getvalue()


def render_svg(scene, robot_path, obstacle_paths=(), size=600) -> str:
    """Static top-down plot: walls, robot path, obstacle paths."""
    ws = scene.workspace
    half = ws.l / 2
    scale = size / ws.l

    def px(x, y):
        return (x - (ws.x - half)) * scale, (ws.y + half - y) * scale

    def poly(points, colour, width=2):
        pts = " ".join(f"{a:.1f},{b:.1f}" for a, b in (px(x, y) for x, y in points))
        return f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="{width}"/>'

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
             f'<rect width="{size}" height="{size}" fill="white" stroke="black"/>']
    for o in scene.obstacles:
        (x1, y1), (x2, y2) = px(o.xi, o.yi), px(o.xf, o.yf)
        parts.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                     f'stroke="black" stroke-width="3"/>')
    if len(robot_path) > 1:
        parts.append(poly(robot_path, "blue"))
    for path in obstacle_paths:
        if len(path) > 1:
            parts.append(poly(path, "red", 1))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ------------------------------------------------------------------ falsification

def random_scenario(rng: np.random.Generator, params: DwaParams, n_obstacles=None):
    """Random leg and obstacle set around its straight path."""
    dist = rng.uniform(1500, 4000)
    ang = rng.uniform(-math.pi, math.pi)
    start = SimState(0.0, 0.0, float(rng.uniform(-math.pi, math.pi)))
    goal = (dist * math.cos(ang), dist * math.sin(ang))
    n = int(rng.integers(1, 4)) if n_obstacles is None else n_obstacles
    obstacles = []
    for _ in range(n):
        s = rng.uniform(0.3, 1.0)
        cx, cy = goal[0] * s, goal[1] * s
        off = rng.uniform(-1500, 1500, size=2)
        policy = POLICIES[int(rng.integers(0, 3))]
        speed = rng.uniform(0, params.V)
        th = rng.uniform(-math.pi, math.pi)
        o = ObstacleState(cx + off[0], cy + off[1], speed * math.cos(th), speed * math.sin(th),
                          float(rng.uniform(50, 300)), policy)
        # every run must begin passive-safe; the robot starts at rest, so only overlap is excluded
        if clearance(start, o, params) <= 0:
            o = replace(o, x=o.x + 2000 * math.cos(ang + math.pi / 2), y=o.y + 2000 * math.sin(ang + math.pi / 2))
        obstacles.append(o.capped(params.V))
    return start, goal, obstacles


@dataclass
class CampaignReport:
    runs: int
    outcomes: dict
    violations: int
    contacts_moving: int
    contacts_total: int
    cycles: int


def falsification_campaign(n_runs: int, seed: int = 0, params: DwaParams | None = None,
                           max_t: float = 20.0, kernels=None) -> CampaignReport:
    params = params or DwaParams()
    kernels = kernels or load_kernels()
    rng = np.random.default_rng(seed)
    outcomes = {"reached": 0, "stopped_safe": 0, "monitor_violation": 0}
    contacts_moving = contacts_total = cycles = 0
    for _ in range(n_runs):
        start, goal, obstacles = random_scenario(rng, params)
        res = run_leg(start, goal, obstacles, params, max_t, kernels=kernels)
        outcomes[res.status] += 1
        contacts_moving += res.contacts_moving
        contacts_total += sum(1 for r in res.rows if r[6] <= 0)
        cycles += len(res.rows)
    return CampaignReport(n_runs, outcomes, outcomes["monitor_violation"], contacts_moving,
                          contacts_total, cycles)
