"""Compare the compiled and numpy kernels on the same random maps.

    python benchmarks/bench_backends.py --size 256 --goals 1,10,100 --reps 5

Prints one table row per (goal count, backend) and the compiled/numpy
speedup for the wavefront and the per-goal A* loop.  Also times one full
``plan_once`` on a 512x512 map with each backend.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from hriapproach import kernels
from hriapproach.bench import random_gridmap, run_bench
from hriapproach.cost_engine import plan_once
from hriapproach.gridmap import OCCUPIED, GridMap, inflate
from hriapproach.search_area import ApproachParams, HumanPose


def plan_median_ms(mod, reps: int) -> float:
    rng = np.random.default_rng(7)
    cells = (rng.random((512, 512)) < 0.001).astype(np.uint8) * OCCUPIED
    cells[60:90, 60:90] = 0
    cm = inflate(GridMap(512, 512, 0.02, (0.0, 0.0), cells), 0.1, 0.3)
    human = HumanPose(6.0, 5.5, math.radians(200))
    params = ApproachParams(alpha1=math.radians(140), m_path=0.5, m_dist=4.0, m_angle=3.0, r_opt=0.6)
    saved = kernels.wavefront
    kernels.wavefront = mod.wavefront
    try:
        times = []
        for _ in range(reps):
            t0 = time.perf_counter()
            plan_once(cm, (1.5, 1.5), human, params)
            times.append(time.perf_counter() - t0)
    finally:
        kernels.wavefront = saved
    return float(np.median(times)) * 1e3


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--density", type=float, default=0.2)
    ap.add_argument("--goals", default="1,10,100")
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels are not built; only the numpy fallback is available")
    goals = [int(g) for g in args.goals.split(",")]
    gmap = random_gridmap(args.size, args.density, args.seed)

    results = {name: run_bench(gmap, goals, args.reps, args.seed, mod) for name, mod in sorted(backends.items())}
    print(f"{'goals':>6} {'backend':>8} {'bfs_ms':>10} {'astar_ms':>11} equal")
    for name, rows in results.items():
        for r in rows:
            print(f"{r.goals:>6} {name:>8} {r.bfs_mean_s * 1e3:>10.3f} {r.astar_mean_s * 1e3:>11.3f} {r.lengths_equal}")
    if len(results) == 2:
        print("\ncompiled vs numpy speedup")
        for py, cy in zip(results["python"], results["cython"]):
            print(f"{py.goals:>6} goals: wavefront {py.bfs_mean_s / cy.bfs_mean_s:6.1f}x  "
                  f"A* loop {py.astar_mean_s / cy.astar_mean_s:6.1f}x")

    print("\nplan_once on 512x512, median of", args.reps)
    for name, mod in sorted(backends.items()):
        print(f"  {name:>8}: {plan_median_ms(mod, args.reps):.1f} ms")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
