"""Local-layer Dynamic Window Approach simulator."""

from cosmop.dwa._accel import load_kernels, numba_requested
from cosmop.dwa.sim import (
    POLICIES, CampaignReport, DwaParams, ExecutionResult, LegResult, ObstacleState, SimState, Window,
    advance_obstacles, braking_bound, clearance, dump_obstacles, dynamic_window, execute_plan,
    falsification_campaign, load_obstacles, passive_safe, random_scenario, render_svg, run_leg,
    select_velocity, step, trace_csv,
)
