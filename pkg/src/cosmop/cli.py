"""Command-line entry point: ``cosmop plan | simulate | bench``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from cosmop import __version__
from cosmop.config import ConfigError, load_config
from cosmop.errors import CosmopError, FormulaSyntaxError, Infeasible, SceneError, SolveTimeout
from cosmop.logic.parser import parse_formula

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_TIMEOUT = 0, 1, 2, 3
EXIT_STOPPED, EXIT_VIOLATION = 4, 5

log = logging.getLogger("cosmop")


def _err(msg):
    print(f"cosmop: {msg}", file=sys.stderr)


# ------------------------------------------------------------------ plan

def cmd_plan(args, config) -> int:
    from cosmop.planner import PlanRequest, dump_plan, synthesize
    from cosmop.scene import load_scene

    try:
        scene = load_scene(Path(args.scene))
        goal = parse_formula(Path(args.spec).read_text())
    except OSError as exc:
        _err(f"cannot read input: {exc}")
        return EXIT_ERROR
    except (SceneError, FormulaSyntaxError) as exc:
        _err(str(exc))
        return EXIT_ERROR
    if args.K is not None:
        horizon = args.K
    elif args.k_min is not None and args.k_max is not None:
        horizon = (args.k_min, args.k_max)
    else:
        _err("give either --K or both --k-min and --k-max")
        return EXIT_ERROR
    timeout = args.timeout if args.timeout is not None else int(config["solver.timeout_ms"])
    try:
        req = PlanRequest(scene, goal, horizon, timeout)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_ERROR
    try:
        plan = synthesize(req, config)
    except Infeasible as exc:
        _err(f"infeasible: no plan for K in {exc.horizons[0]}..{exc.horizons[-1]}")
        return EXIT_INFEASIBLE
    except SolveTimeout as exc:
        _err(f"no verdict at K={exc.K}: {exc.reason}")
        return EXIT_TIMEOUT
    text = dump_plan(plan)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            _err(f"cannot write plan: {exc}")
            return EXIT_ERROR
    else:
        sys.stdout.write(text + "\n")
    print(f"plan: K={plan.K}, solve {plan.stats.get('solve_ms', 0):.0f} ms", file=sys.stderr)
    for k, step in enumerate(plan.steps, 1):
        w = step.waypoint
        log.info("%3d %-9s (%d, %d, %d)", k, step.primitive, w.x, w.y, w.alpha)
    return EXIT_OK


# ------------------------------------------------------------------ simulate

def _jitter(obstacles, seed, rng_mm=50.0):
    from dataclasses import replace
    rng = np.random.default_rng(seed)
    return [replace(o, x=o.x + rng.uniform(-rng_mm, rng_mm), y=o.y + rng.uniform(-rng_mm, rng_mm))
            for o in obstacles]


def cmd_simulate(args, config) -> int:
    from cosmop.dwa import DwaParams, execute_plan, load_obstacles, render_svg, trace_csv
    from cosmop.planner import current_state_of, plan_from_json, plan_to_receding_horizon, validate_plan
    from cosmop.scene import dump_scene, load_scene

    try:
        scene = load_scene(Path(args.scene))
        plan = plan_from_json(json.loads(Path(args.plan).read_text()), scene=scene)
        obstacles = load_obstacles(Path(args.obstacles).read_text()) if args.obstacles else []
        params = DwaParams.from_config(config, robot_l=scene.agent.l)
    except OSError as exc:
        _err(f"cannot read input: {exc}")
        return EXIT_ERROR
    except (CosmopError, ValueError, KeyError, TypeError) as exc:
        _err(f"invalid input: {exc}")
        return EXIT_ERROR
    if plan.full_trace is not None:
        report = validate_plan(plan)
        if not report.ok:
            _err(f"plan does not validate against the scene: {report.summary()}")
            return EXIT_ERROR
    if args.seed is not None:
        obstacles = _jitter(obstacles, args.seed)

    result = execute_plan(plan, obstacles, params, max_t_leg=args.max_t)
    if args.trace_csv:
        Path(args.trace_csv).write_text(trace_csv(result.rows))
    if args.svg:
        Path(args.svg).write_text(render_svg(scene, result.robot_path, result.obstacle_paths))

    legs = len(result.legs)
    if result.status == "reached":
        print(f"all {legs} GoTo legs reached", file=sys.stderr)
    elif result.status == "stopped_safe":
        leg = result.legs[-1]
        s = leg.state
        _err(f"step {result.failed_step + 1} stopped safely {leg.progress:.0f} mm short of its waypoint "
             f"at ({s.x:.0f}, {s.y:.0f}); the rest of the plan is discarded")
        _, objects = current_state_of(plan, result.failed_step)
        from cosmop.scene import Pose
        pose = Pose(round(s.x), round(s.y), round(math.degrees(s.heading)) % 360)
        try:
            req = plan_to_receding_horizon(plan, (pose, objects))
        except CosmopError as exc:
            _err(f"cannot re-root the plan: {exc}")
        else:
            hint = "replan from the current state"
            if args.replan_scene:
                Path(args.replan_scene).write_text(dump_scene(req.scene))
                hint += f": cosmop plan --scene {args.replan_scene} --spec <goal> --K {req.K}"
            _err(hint)
    else:
        _err(f"passive-safety monitor violated on step {result.failed_step + 1}; this is a bug")
    return result.exit_code


# ------------------------------------------------------------------ bench

def cmd_bench(args, config) -> int:
    from cosmop.rooms import format_table, rows_to_csv, run_suite

    reps = args.reps if args.reps is not None else int(config.get("bench.reps", 35))
    if reps < 1:
        _err("--reps must be >= 1")
        return EXIT_ERROR
    timeout = args.timeout if args.timeout is not None else int(config["solver.timeout_ms"])
    rows = run_suite(args.suite, reps, args.jobs, timeout, config)
    print(format_table(rows))
    if args.csv:
        Path(args.csv).write_text(rows_to_csv(rows))
    bad = [r for r in rows if not r.sat]
    for r in bad:
        s = r.scenario
        _err(f"row env={s.env_side_m} m rooms={s.rooms} K={s.K} is not Sat ({r.verdict})")
    return EXIT_INFEASIBLE if bad else EXIT_OK


# ------------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cosmop", description="Integrated task and motion planning with SMT.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help="TOML configuration file")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="synthesize a plan")
    plan.add_argument("--scene", required=True)
    plan.add_argument("--spec", required=True, help="goal formula file")
    plan.add_argument("--K", type=int)
    plan.add_argument("--k-min", type=int)
    plan.add_argument("--k-max", type=int)
    plan.add_argument("--timeout", type=int, help="per-solve timeout in ms")
    plan.add_argument("--out")
    plan.set_defaults(func=cmd_plan)

    sim = sub.add_parser("simulate", help="execute a plan with the DWA simulator")
    sim.add_argument("--plan", required=True)
    sim.add_argument("--scene", required=True)
    sim.add_argument("--obstacles", help="moving-obstacle scenario (JSON list)")
    sim.add_argument("--seed", type=int, help="jitter obstacle start positions by up to 50 mm")
    sim.add_argument("--svg")
    sim.add_argument("--trace-csv")
    sim.add_argument("--max-t", type=float, default=60.0, help="time budget per GoTo leg (s)")
    sim.add_argument("--replan-scene", help="write the re-rooted scene here when a leg stops")
    sim.set_defaults(func=cmd_simulate)

    bench = sub.add_parser("bench", help="room-grid solver benchmark")
    bench.add_argument("--suite", required=True, choices=("size", "rooms", "k", "complexity"))
    bench.add_argument("--reps", type=int)
    bench.add_argument("--csv")
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--timeout", type=int)
    bench.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; 2 means Infeasible here
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config)
    except (OSError, ConfigError) as exc:
        _err(f"config: {exc}")
        return EXIT_ERROR
    return args.func(args, config)


if __name__ == "__main__":
    sys.exit(main())
