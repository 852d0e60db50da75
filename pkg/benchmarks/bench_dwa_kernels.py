"""Compare the numba and numpy dynamic-window kernels.

    python benchmarks/bench_dwa_kernels.py --windows 2000 --obstacles 3

Reports per-window evaluation time for both backends after a warm-up call
(numba compiles on first use) and checks that they agree.
"""

import argparse
import time

import numpy as np

from cosmop.dwa import DwaParams, SimState, dynamic_window, load_kernels, random_scenario


def states(n, n_obstacles, seed):
    rng = np.random.default_rng(seed)
    params = DwaParams()
    out = []
    for _ in range(n):
        start, goal, obs = random_scenario(rng, params, n_obstacles)
        st = SimState(start.x, start.y, start.heading, rng.uniform(0, params.v_max), rng.uniform(-1, 1))
        out.append((st, obs, goal))
    return params, out


def bench(kernels, params, cases, repeat):
    dynamic_window(*cases[0][:2], params, cases[0][2], kernels)  # warm-up / JIT compile
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        for st, obs, goal in cases:
            dynamic_window(st, obs, params, goal, kernels)
        best = min(best, time.perf_counter() - t)
    return best / len(cases)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--windows", type=int, default=2000)
    ap.add_argument("--obstacles", type=int, default=3)
    ap.add_argument("--n-v", type=int, default=11)
    ap.add_argument("--n-w", type=int, default=15)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    params, cases = states(args.windows, args.obstacles, args.seed)
    params = DwaParams(n_v=args.n_v, n_w=args.n_w)
    fast, slow = load_kernels(True), load_kernels(False)
    if fast.NAME != "numba":
        print("numba unavailable; only the numpy kernels can be timed")
    worst = 0.0
    for st, obs, goal in cases[:200]:
        a = dynamic_window(st, obs, params, goal, fast)
        b = dynamic_window(st, obs, params, goal, slow)
        assert (a.admissible == b.admissible).all()
        worst = max(worst, np.abs(a.heading - b.heading).max(), np.abs(a.clearance - b.clearance).max())
    t_fast = bench(fast, params, cases, args.repeat)
    t_slow = bench(slow, params, cases, args.repeat)
    print(f"grid {args.n_v}x{args.n_w}, {args.obstacles} obstacles, {args.windows} windows")
    print(f"{fast.NAME:>6}: {t_fast * 1e6:9.1f} us/window")
    print(f"{slow.NAME:>6}: {t_slow * 1e6:9.1f} us/window")
    print(f"speed-up {t_slow / t_fast:.2f}x, max score difference {worst:.2e}")


if __name__ == "__main__":
    main()
