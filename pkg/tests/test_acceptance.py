"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are repeated in the terminal summary either way.
"""

import csv
import math
import time

import numpy as np
import pytest

from hriapproach import kernels
from hriapproach.bench import random_gridmap, run_bench
from hriapproach.cli import main
from hriapproach.cost_engine import PlanDiagnostics, multi_goal_bfs, plan_once
from hriapproach.errors import NoGoalFound
from hriapproach.gridmap import OCCUPIED, CellIndex, Costmap, GridMap, inflate
from hriapproach.lab import shipped_lab_path
from hriapproach.scenario import load_scenario
from hriapproach.search_area import ApproachParams, CandidateCell, HumanPose, define_search_area
from oracles import best_cell_oracle, bfs_length, search_area_oracle

DEG = math.pi / 180


def report(record, number, title, ok, detail):
    record(number, title, ok, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}")


@pytest.fixture(scope="module")
def lab_runs(tmp_path_factory):
    """Run the shipped lab scenario twice through the CLI, plus the stage export."""
    out = []
    for k in range(2):
        d = tmp_path_factory.mktemp(f"lab{k}")
        t0 = time.perf_counter()
        code = main(["run", "--scenario", str(shipped_lab_path()), "--out", str(d / "run")])
        elapsed = time.perf_counter() - t0
        for h in range(5):
            main(["plan", "--scenario", str(shipped_lab_path()), "--human", str(h), "--out", str(d / f"plan{h}")])
        out.append((d, code, elapsed))
    return out


def read_rows(run_dir):
    with (run_dir / "results.csv").open(newline="") as fh:
        return list(csv.DictReader(fh))


def test_criterion_1_lab_reproduction(lab_runs, record_acceptance):
    d, code, elapsed = lab_runs[0]
    rows = read_rows(d / "run")
    dist = [float(r["distance_m"]) for r in rows]
    uni = [float(r["offset_deg"]) for r in rows if r["mode"] == "unidirectional"]
    bi = [abs(float(r["offset_deg"])) for r in rows if r["mode"] == "bidirectional"]
    checks = {
        "50 rows": len(rows) == 50,
        "all succeed": code == 0 and all(r["success"] == "1" for r in rows),
        "distance in [0.45, 0.95]": all(0.45 <= v <= 0.95 for v in dist),
        "uni offset in [-15, 15]": bool(uni) and all(-15 <= v <= 15 for v in uni),
        "bi |offset| in [70, 110]": bool(bi) and all(70 <= v <= 110 for v in bi),
        "runtime < 30 s": elapsed < 30,
    }
    ok = all(checks.values())
    detail = (f"rows={len(rows)} dist=[{min(dist):.3f},{max(dist):.3f}] "
              f"uni=[{min(uni):.1f},{max(uni):.1f}] |bi|=[{min(bi):.1f},{max(bi):.1f}] "
              f"t={elapsed:.1f}s" + ("" if ok else f" failed={[k for k, v in checks.items() if not v]}"))
    report(record_acceptance, 1, "lab-analog reproduction", ok, detail)
    assert ok, detail


def test_criterion_2_search_area_oracle(record_acceptance):
    rng = np.random.default_rng(2024)
    n, mismatches = 25, 0
    for _ in range(n):
        w, h = int(rng.integers(16, 129)), int(rng.integers(16, 129))
        res = float(rng.choice([0.02, 0.05, 0.1]))
        origin = (float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3)))
        human = HumanPose(origin[0] + rng.uniform(0, (w - 1) * res), origin[1] + rng.uniform(0, (h - 1) * res),
                          rng.uniform(-math.pi, math.pi), ["standing", "sitting"][int(rng.integers(2))])
        r_min = float(rng.uniform(0.1, 1.0))
        params = ApproachParams(r_min=r_min, r_max=r_min + float(rng.uniform(0, 1.0)),
                                alpha1=float(rng.uniform(5, 360)) * DEG, alpha2=float(rng.uniform(5, 180)) * DEG,
                                alpha_mean=float(rng.uniform(0, 180)) * DEG)
        got = {tuple(c.cell) for c in define_search_area(GridMap.empty(w, h, res, origin), human, params)}
        if got != set(search_area_oracle(w, h, res, origin, human, params)):
            mismatches += 1
    ok = mismatches == 0
    report(record_acceptance, 2, "search area equals exhaustive oracle", ok,
           f"{n} configs, {mismatches} mismatches")
    assert ok


def test_criterion_3_multi_goal_bfs_oracle(record_acceptance):
    rng = np.random.default_rng(33)
    maps, goals_checked, mismatches = 100, 0, 0
    for _ in range(maps):
        occ = rng.random((64, 64)) < 0.2
        cm = Costmap(64, 64, 0.05, (0.0, 0.0), np.where(occ, 255, 0).astype(np.uint8))
        free = np.argwhere(~occ)
        r0, c0 = (int(v) for v in free[rng.integers(len(free))])
        picks = free[rng.choice(len(free), 25, replace=False)]
        cands = [CandidateCell(CellIndex(int(c), int(r)), 0.5, 0.0) for r, c in picks]
        out, _ = multi_goal_bfs(cm, CellIndex(c0, r0), cands)
        got = {tuple(c.cell): c.path_cells for c in out}
        for cand in cands:
            goals_checked += 1
            if got.get(tuple(cand.cell), -1) != bfs_length(~occ, (c0, r0), tuple(cand.cell)):
                mismatches += 1
    ok = mismatches == 0
    report(record_acceptance, 3, "multi-goal BFS equals per-goal BFS", ok,
           f"{maps} maps, {goals_checked} goals, {mismatches} mismatches")
    assert ok


def small_scenario(rng, size):
    cells = np.zeros((size, size), np.uint8)
    cells[rng.random((size, size)) < 0.04] = OCCUPIED
    cm = inflate(GridMap(size, size, 0.05, (0.0, 0.0), cells), 0.1, 0.3)
    free = np.argwhere(cm.cost < 255)
    r, c = free[rng.integers(len(free))]
    robot = cm.cell_to_world(CellIndex(int(c), int(r)))
    span = size * 0.05
    human = HumanPose(rng.uniform(0.3, span - 0.3), rng.uniform(0.3, span - 0.3),
                      rng.uniform(-math.pi, math.pi), ["standing", "sitting"][int(rng.integers(2))])
    params = ApproachParams(r_min=float(rng.uniform(0.25, 0.5)), r_max=float(rng.uniform(0.55, 0.9)),
                            alpha1=float(rng.uniform(60, 360)) * DEG, alpha2=float(rng.uniform(40, 150)) * DEG,
                            alpha_mean=float(rng.uniform(0, 90)) * DEG,
                            m_cm=float(rng.uniform(0, 0.05)), m_path=float(rng.uniform(0.1, 2)),
                            m_dist=float(rng.uniform(0, 4)), m_angle=float(rng.uniform(0, 3)),
                            r_opt=float(rng.uniform(0, 0.7)))
    return cm, robot, human, params


def test_criterion_4_best_cell_oracle(record_acceptance):
    rng = np.random.default_rng(44)
    n, planned, mismatches = 50, 0, 0
    for _ in range(n):
        cm, robot, human, params = small_scenario(rng, int(rng.integers(24, 65)))
        ref_cell, _ = best_cell_oracle(cm.cost, cm.resolution, cm.origin, robot, human, params)
        try:
            _, diag = plan_once(cm, robot, human, params)
            cell = tuple(diag.best.cell)
            planned += 1
        except NoGoalFound:
            cell = None
        if cell != ref_cell:
            mismatches += 1
    ok = mismatches == 0 and planned >= n // 2
    report(record_acceptance, 4, "best cell equals brute-force recomputation", ok,
           f"{n} scenarios ({planned} with a goal), {mismatches} mismatches")
    assert ok


def test_criterion_5_argmin_scaling(record_acceptance):
    rng = np.random.default_rng(55)
    n, changed, done = 20, 0, 0
    while done < n:
        cm, robot, human, params = small_scenario(rng, 48)
        try:
            _, base = plan_once(cm, robot, human, params)
        except NoGoalFound:
            continue
        done += 1
        k = float(np.exp(rng.uniform(math.log(1e-3), math.log(1e3))))
        _, scaled = plan_once(cm, robot, human, params.scaled(k))
        changed += scaled.best.cell != base.best.cell
    ok = changed == 0
    report(record_acceptance, 5, "argmin invariant under weight scaling", ok, f"{n} scenarios, {changed} changed")
    assert ok


def test_criterion_6_safety(lab_runs, record_acceptance):
    d, _, _ = lab_runs[0]
    rows = read_rows(d / "run")
    reported = sum(int(r["lethal_violations"]) for r in rows)
    cm = load_scenario(shipped_lab_path()).costmap
    ticks = hits = 0
    for traj in sorted((d / "run" / "trajectories").glob("*.csv")):
        with traj.open(newline="") as fh:
            for row in csv.DictReader(fh):
                ticks += 1
                hits += cm.is_lethal(cm.world_to_cell(float(row["x_m"]), float(row["y_m"])))
    ok = reported == 0 and hits == 0 and ticks > 0
    report(record_acceptance, 6, "no lethal cell on any trajectory", ok,
           f"{ticks} poses checked, {hits} lethal, {reported} reported by simulator")
    assert ok


def budget_world():
    rng = np.random.default_rng(7)
    cells = np.zeros((512, 512), np.uint8)
    cells[rng.random((512, 512)) < 0.001] = OCCUPIED
    cells[0, :] = cells[-1, :] = cells[:, 0] = cells[:, -1] = OCCUPIED
    cells[60:90, 60:90] = 0
    cm = inflate(GridMap(512, 512, 0.02, (0.0, 0.0), cells), 0.1, 0.3)
    human = HumanPose(6.0, 5.5, 200 * DEG)
    params = ApproachParams(alpha1=140 * DEG, m_path=0.5, m_dist=4.0, m_angle=3.0, r_opt=0.6)
    return cm, (1.5, 1.5), human, params


def test_criterion_7_replan_budget(record_acceptance):
    cm, robot, human, params = budget_world()
    times = []
    for _ in range(10):
        diag = PlanDiagnostics(cm.shape)
        t0 = time.perf_counter()
        plan_once(cm, robot, human, params, diag)
        times.append(time.perf_counter() - t0)
    median_ms = float(np.median(times)) * 1e3
    size = diag.sizes["search_area"]
    ok = size >= 1000 and median_ms < 100
    report(record_acceptance, 7, "plan_once under 100 ms on 512x512", ok,
           f"|S|={size} (after pruning {diag.sizes['angle']}), median {median_ms:.1f} ms, "
           f"backend={kernels.BACKEND}")
    assert ok


def test_criterion_8_one_shot_efficiency(record_acceptance):
    gmap = random_gridmap(256, 0.2, 0)
    row = run_bench(gmap, [100], reps=3, seed=0)[0]
    ok = row.bfs_mean_s < row.astar_mean_s and row.lengths_equal and row.goals == 100
    report(record_acceptance, 8, "one wavefront beats 100 A* searches", ok,
           f"backend={row.backend} bfs={row.bfs_mean_s * 1e3:.2f} ms astar={row.astar_mean_s * 1e3:.2f} ms "
           f"speedup={row.speedup:.1f}x lengths_equal={row.lengths_equal} reached={row.reached}")
    assert ok


def test_criterion_9_determinism(lab_runs, record_acceptance):
    (a, _, _), (b, _, _) = lab_runs
    files = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    other = sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
    differ = [str(p) for p in files if (a / p).read_bytes() != (b / p).read_bytes()]
    kinds = {p.suffix for p in files}
    ok = files == other and not differ and {".csv", ".pgm", ".ppm"} <= kinds
    report(record_acceptance, 9, "repeat run is byte-identical", ok,
           f"{len(files)} files compared ({', '.join(sorted(kinds))}), {len(differ)} differ")
    assert ok
