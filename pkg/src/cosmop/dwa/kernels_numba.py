"""Numba-compiled loop kernels; same contract as :mod:`kernels_numpy`."""

from __future__ import annotations

import math

import numpy as np
from numba import njit

NAME = "numba"
STRAIGHT_W = 1e-6


@njit(cache=True)
def _arc(x, y, th, v, w, dt):
    th1 = th + w * dt
    if abs(w) < STRAIGHT_W:
        return x + v * dt * math.cos(th), y + v * dt * math.sin(th), th1
    r = v / w
    return x + r * (math.sin(th1) - math.sin(th)), y - r * (math.cos(th1) - math.cos(th)), th1


@njit(cache=True)
def _wrap(a):
    return math.atan2(math.sin(a), math.cos(a))


def arc_step(x, y, th, v, w, dt):
    """Exact unicycle update along a circular arc (scalars only)."""
    return _arc(float(x), float(y), float(th), float(v), float(w), float(dt))


@njit(cache=True)
def _clearance_now(x, y, obs, robot_r):
    out = np.empty(obs.shape[0])
    for k in range(obs.shape[0]):
        out[k] = math.hypot(obs[k, 0] - x, obs[k, 1] - y) - robot_r - obs[k, 4]
    return out


def clearance_now(x, y, obs, robot_r):
    return _clearance_now(float(x), float(y), np.ascontiguousarray(obs, dtype=np.float64).reshape(-1, 5),
                          float(robot_r))


@njit(cache=True)
def _window(x, y, th, vs, ws, obs, goal_x, goal_y, robot_r,
            b, a_max, eps, V, v_brake, t_head, t_pred, n_pred, clear_cap, v_ref, d_stop):
    nv, nw, m = vs.shape[0], ws.shape[0], obs.shape[0]
    adm = np.empty((nv, nw), dtype=np.bool_)
    heading = np.empty((nv, nw))
    clearance = np.empty((nv, nw))
    for i in range(nv):
        v = vs[i]
        margin = (v * v / (2.0 * b) + V * v / b
                  + (a_max / b + 1.0) * (a_max * eps * eps / 2.0 + eps * (v + V)))
        for j in range(nw):
            w = ws[j]
            ex, ey, _ = _arc(x, y, th, v, w, eps)
            d_next = np.inf
            for k in range(m):
                d = math.hypot(ex - obs[k, 0], ey - obs[k, 1]) - robot_r - obs[k, 4]
                if d < d_next:
                    d_next = d
            adm[i, j] = v <= v_brake or d_next > margin
            px, py, pth = _arc(x, y, th, v, w, t_head)
            diff = abs(_wrap(math.atan2(goal_y - py, goal_x - px) - pth))
            heading[i, j] = 1.0 - diff / math.pi
            if m == 0:
                clearance[i, j] = 1.0
                continue
            vc = max(v, v_ref)
            best = np.inf
            hit = n_pred + 1
            for s in range(1, n_pred + 1):
                t = t_pred * s / n_pred
                qx, qy, _ = _arc(x, y, th, vc, w, t)
                for k in range(m):
                    d = math.hypot(qx - (obs[k, 0] + obs[k, 2] * t),
                                   qy - (obs[k, 1] + obs[k, 3] * t)) - robot_r - obs[k, 4] - d_stop
                    if d < best:
                        best = d
                if best <= 0:
                    hit = s
                    break
            if hit <= n_pred:
                clearance[i, j] = 0.5 * (hit - 1) / n_pred
            else:
                clearance[i, j] = 0.5 + 0.5 * min(best, clear_cap) / clear_cap
    return adm, heading, clearance


def evaluate_window(x, y, th, vs, ws, obs, goal_x, goal_y, robot_r,
                    b, a_max, eps, V, v_brake, t_head, t_pred, n_pred, clear_cap, v_ref, d_stop):
    obs = np.ascontiguousarray(obs, dtype=np.float64).reshape(-1, 5)
    return _window(float(x), float(y), float(th), np.ascontiguousarray(vs, dtype=np.float64),
                   np.ascontiguousarray(ws, dtype=np.float64), obs, float(goal_x), float(goal_y),
                   float(robot_r), float(b), float(a_max), float(eps), float(V), float(v_brake),
                   float(t_head), float(t_pred), int(n_pred), float(clear_cap), float(v_ref), float(d_stop))
