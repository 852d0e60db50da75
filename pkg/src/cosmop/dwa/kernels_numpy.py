"""Vectorised numpy kernels for the dynamic window."""

from __future__ import annotations

import numpy as np

NAME = "numpy"
STRAIGHT_W = 1e-6


def arc_step(x, y, th, v, w, dt):
    """Exact unicycle update along a circular arc (array-friendly)."""
    x, y, th, v, w = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (x, y, th, v, w)))
    straight = np.abs(w) < STRAIGHT_W
    w_safe = np.where(straight, 1.0, w)
    th1 = th + w * dt
    r = v / w_safe
    nx = np.where(straight, x + v * dt * np.cos(th), x + r * (np.sin(th1) - np.sin(th)))
    ny = np.where(straight, y + v * dt * np.sin(th), y - r * (np.cos(th1) - np.cos(th)))
    return nx, ny, th1


def clearance_now(x, y, obs, robot_r):
    """Centre distance minus summed radii to every obstacle row ``(x, y, vx, vy, r)``."""
    if len(obs) == 0:
        return np.empty(0)
    return np.hypot(obs[:, 0] - x, obs[:, 1] - y) - robot_r - obs[:, 4]


def evaluate_window(x, y, th, vs, ws, obs, goal_x, goal_y, robot_r,
                    b, a_max, eps, V, v_brake, t_head, t_pred, n_pred, clear_cap, v_ref, d_stop):
    """Admissibility mask, heading score and clearance score on the (v, w) grid.

    A pair is admissible when it is no faster than the braking speed
    ``v_brake`` or when the robot's position after one cycle on that arc
    keeps the augmented margin to every obstacle's current position.  The
    margin contains the obstacle's worst-case travel ``eps * V``, so the
    bare passive-safety bound still holds once obstacles have moved.
    Returns three ``(len(vs), len(ws))`` arrays.
    """
    vv, ww = np.meshgrid(vs, ws, indexing="ij")
    margin = (vv * vv / (2.0 * b) + V * vv / b
              + (a_max / b + 1.0) * (a_max * eps * eps / 2.0 + eps * (vv + V)))
    if obs.shape[0] == 0:
        adm = np.ones(vv.shape, dtype=bool)
    else:
        # robot position after one cycle against the obstacles' current positions
        ex, ey, _ = arc_step(x, y, th, vv, ww, eps)
        d_next = (np.hypot(ex[..., None] - obs[:, 0], ey[..., None] - obs[:, 1])
                  - robot_r - obs[:, 4]).min(axis=-1)
        adm = (vv <= v_brake) | (d_next > margin)

    px, py, pth = arc_step(x, y, th, vv, ww, t_head)
    bearing = np.arctan2(goal_y - py, goal_x - px)
    diff = np.abs(np.angle(np.exp(1j * (bearing - pth))))
    heading = 1.0 - diff / np.pi

    if obs.shape[0] == 0:
        clearance = np.ones_like(vv)
    else:
        # arcs are swept at no less than v_ref so that slowing down alone
        # never looks safer than steering; "contact" means coming within
        # d_stop, where no forward speed is admissible any more.  Colliding
        # arcs score by time-to-contact in [0, 0.5), free arcs by smallest
        # clearance in [0.5, 1]
        vc = np.maximum(vv, v_ref)
        best = np.full(vv.shape, np.inf)
        hit = np.full(vv.shape, n_pred + 1)
        for i in range(1, n_pred + 1):
            t = t_pred * i / n_pred
            qx, qy, _ = arc_step(x, y, th, vc, ww, t)
            ox = obs[:, 0] + obs[:, 2] * t
            oy = obs[:, 1] + obs[:, 3] * t
            d = (np.hypot(qx[..., None] - ox, qy[..., None] - oy) - robot_r - obs[:, 4]).min(axis=-1) - d_stop
            hit = np.where((d <= 0) & (hit > n_pred), i, hit)
            best = np.minimum(best, d)
        free = 0.5 + 0.5 * np.minimum(best, clear_cap) / clear_cap
        clearance = np.where(hit > n_pred, free, 0.5 * (hit - 1) / n_pred)
    return adm, heading, clearance
