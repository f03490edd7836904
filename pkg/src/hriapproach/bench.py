"""One multi-goal wavefront vs. one A* search per goal, on the same grid."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hriapproach import kernels
from hriapproach.gridmap import FREE, GridMap

BENCH_HEADER = ["goals", "reps", "backend", "bfs_mean_s", "astar_mean_s", "speedup", "lengths_equal", "reached"]


@dataclass
class BenchRow:
    goals: int
    reps: int
    backend: str
    bfs_mean_s: float
    astar_mean_s: float
    lengths_equal: bool
    reached: int

    @property
    def speedup(self) -> float:
        return self.astar_mean_s / self.bfs_mean_s if self.bfs_mean_s > 0 else float("inf")

    def csv_row(self) -> list:
        return [self.goals, self.reps, self.backend, f"{self.bfs_mean_s:.6e}", f"{self.astar_mean_s:.6e}",
                f"{self.speedup:.2f}", int(self.lengths_equal), self.reached]


def random_gridmap(size: int = 256, density: float = 0.2, seed: int = 0) -> GridMap:
    rng = np.random.default_rng(seed)
    cells = (rng.random((size, size)) < density).astype(np.uint8)
    return GridMap(size, size, 0.05, (0.0, 0.0), cells)


def pick_goals(passable: np.ndarray, count: int, seed: int = 0,
               inner: int = 9, outer: int = 18) -> tuple[int, np.ndarray]:
    """Choose a start cell and ``count`` goal cells on an annulus around a random center.

    The annulus widens until it holds enough free cells, mimicking a search
    area around a person somewhere else on the map.
    """
    rng = np.random.default_rng(seed + 1)
    h, w = passable.shape
    free = np.flatnonzero(passable.reshape(-1))
    if free.size < count + 1:
        raise ValueError("map has too few free cells")
    start = int(rng.choice(free))
    center = (int(rng.integers(w // 4, 3 * w // 4)), int(rng.integers(h // 4, 3 * h // 4)))
    cols, rows = free % w, free // w
    dist = np.hypot(cols - center[0], rows - center[1])
    while True:
        ring = free[(dist >= inner) & (dist <= outer) & (free != start)]
        if ring.size >= count or outer > max(h, w) * 2:
            break
        outer += 4
    goals = rng.choice(ring, size=min(count, ring.size), replace=False)
    return start, np.sort(goals).astype(np.int64)


def bench_once(passable: np.ndarray, start: int, goals: np.ndarray, reps: int, backend=None,
               connectivity: int = 4) -> BenchRow:
    mod = backend if backend is not None else kernels._impl
    name = "cython" if mod.__name__.endswith("_ckernels") else "python"
    passable = np.ascontiguousarray(passable, dtype=np.uint8)

    bfs_times, astar_times = [], []
    bfs_len = astar_len = None
    for _ in range(reps):
        t0 = time.perf_counter()
        depth = mod.wavefront(passable, start, goals, -1, connectivity)
        bfs_len = depth.reshape(-1)[goals].tolist()
        bfs_times.append(time.perf_counter() - t0)

        t0 = time.perf_counter()
        astar_len = [mod.astar(passable, start, int(g), connectivity) for g in goals]
        astar_times.append(time.perf_counter() - t0)
    return BenchRow(len(goals), reps, name, float(np.mean(bfs_times)), float(np.mean(astar_times)),
                    bfs_len == astar_len, sum(1 for v in bfs_len if v >= 0))


def run_bench(gmap: GridMap, goal_counts: list[int], reps: int = 5, seed: int = 0,
              backend=None) -> list[BenchRow]:
    passable = (gmap.cells == FREE).astype(np.uint8)
    rows = []
    for count in goal_counts:
        start, goals = pick_goals(passable, count, seed)
        rows.append(bench_once(passable, start, goals, reps, backend))
    return rows


def write_bench_csv(path, rows: list[BenchRow]) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BENCH_HEADER)
        for row in rows:
            writer.writerow(row.csv_row())
