"""``approach`` command line: plan, run, bench, render.

Exit codes: 0 ok, 1 bad input, 2 no reachable goal, 3 at least one failed approach.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from hriapproach import kernels
from hriapproach.bench import random_gridmap, run_bench, write_bench_csv
from hriapproach.cost_engine import PlanDiagnostics, export_stages, plan_once
from hriapproach.errors import ApproachError, NoGoalFound, ParseError
from hriapproach.gridmap import load_map, load_pgm_map
from hriapproach.render import render, write_ppm
from hriapproach.scenario import load_scenario
from hriapproach.simulate import final_poses, read_final_poses, run_scenario, write_report

EXIT_OK, EXIT_INPUT, EXIT_NO_GOAL, EXIT_FAILED = 0, 1, 2, 3


def _goal_list(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("goal counts must be >= 1")
    return vals


def cmd_plan(args) -> int:
    sc = load_scenario(args.scenario)
    sc.validate()
    if not 0 <= args.human < len(sc.humans):
        raise ParseError(f"--human {args.human} out of range (scenario has {len(sc.humans)})")
    human = sc.humans[args.human]
    diag = PlanDiagnostics(sc.costmap.shape)
    robot = sc.robot
    try:
        goal, _ = plan_once(sc.costmap, (robot.x, robot.y), human, sc.params_for(args.human), diag)
    except NoGoalFound as exc:
        export_stages(diag, args.out)
        print(f"no goal for human {args.human} ({sc.human_name(args.human)}): "
              f"candidate set empty after stage '{exc.stage}'; stage sizes {diag.sizes}", file=sys.stderr)
        return EXIT_NO_GOAL
    export_stages(diag, args.out)
    b = diag.breakdown
    print(f"goal x_m={goal.x:.3f} y_m={goal.y:.3f} alpha_deg={math.degrees(goal.alpha):.1f} "
          f"total={b.total:.4f} (cm={b.c_cm:.4f} path={b.c_path:.4f} dist={b.c_dist:.4f} angle={b.c_angle:.4f}) "
          f"stages={diag.sizes}")
    return EXIT_OK


def cmd_run(args) -> int:
    sc = load_scenario(args.scenario)
    sc.validate()
    report = run_scenario(sc, args.rounds)
    out = Path(args.out)
    write_report(report, out)
    write_ppm(out / "poses.ppm", render(sc, final_poses(report)))
    print(report.summary(), end="")
    return EXIT_FAILED if report.failures else EXIT_OK


def cmd_bench(args) -> int:
    if args.map:
        path = Path(args.map)
        gmap = load_pgm_map(path, 0.05) if path.suffix.lower() == ".pgm" else load_map(path)
    else:
        gmap = random_gridmap(args.size, args.density, args.seed)
    backends = kernels.available_backends()
    if args.backend == "all":
        chosen = list(backends.values())
    elif args.backend == "auto":
        chosen = [kernels._impl]
    elif args.backend in backends:
        chosen = [backends[args.backend]]
    else:
        raise ParseError(f"backend {args.backend!r} is not available (have {sorted(backends)})")
    rows = []
    for mod in chosen:
        rows.extend(run_bench(gmap, args.goals, args.reps, args.seed, mod))
    print(f"{'goals':>6} {'backend':>8} {'bfs_ms':>10} {'astar_ms':>10} {'speedup':>8} equal")
    for r in rows:
        print(f"{r.goals:>6} {r.backend:>8} {r.bfs_mean_s * 1e3:>10.3f} {r.astar_mean_s * 1e3:>10.3f} "
              f"{r.speedup:>8.2f} {r.lengths_equal}")
    if args.out:
        out = Path(args.out)
        if out.suffix != ".csv":
            out.mkdir(parents=True, exist_ok=True)
            out = out / "bench.csv"
        write_bench_csv(out, rows)
    return EXIT_OK if all(r.lengths_equal for r in rows) else EXIT_FAILED


def cmd_render(args) -> int:
    sc = load_scenario(args.scenario)
    poses = read_final_poses(args.report) if args.report else None
    out = Path(args.out)
    if out.suffix != ".ppm":
        out.mkdir(parents=True, exist_ok=True)
        out = out / "render.ppm"
    write_ppm(out, render(sc, poses))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="approach", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan once and write the six stage layers as PGM")
    p.add_argument("--scenario", required=True)
    p.add_argument("--human", type=int, default=0)
    p.add_argument("--out", default="plan_out")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("run", help="simulate every approach of a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", default="run_out")
    p.add_argument("--rounds", type=int, default=None, help="override the scenario's round count")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="time one multi-goal wavefront against repeated A*")
    p.add_argument("--map", help="ASCII map or P5 PGM; a random map is generated otherwise")
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--density", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--goals", type=_goal_list, default=[1, 10, 100])
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--backend", default="auto", help="auto, all, cython or python")
    p.add_argument("--out", default=None, help="CSV file or directory")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", help="draw map, search areas and poses as PPM")
    p.add_argument("--scenario", required=True)
    p.add_argument("--report", help="results.csv from 'approach run'")
    p.add_argument("--out", default="render.ppm")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ApproachError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
