"""Run every person of a scenario for several rounds and summarize the final poses."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from hriapproach.planner import ApproachResult, run_approach, write_trajectory_csv
from hriapproach.scenario import Scenario
from hriapproach.search_area import Mode

RESULT_HEADER = ["round", "human", "name", "mode", "success", "reason", "final_x_m", "final_y_m",
                 "final_theta_rad", "distance_m", "offset_deg", "ticks", "lethal_violations"]


@dataclass
class ApproachRow:
    round: int
    human: int
    name: str
    result: ApproachResult

    def csv_row(self) -> list:
        r = self.result
        return [self.round, self.human, self.name, r.mode.value, int(r.success), r.reason,
                f"{r.robot.x:.6f}", f"{r.robot.y:.6f}", f"{r.robot.theta:.6f}",
                f"{r.distance:.6f}", f"{r.offset_deg:.6f}", r.ticks, r.lethal_violations]


@dataclass
class RunReport:
    rows: list[ApproachRow] = field(default_factory=list)

    @property
    def failures(self) -> list[ApproachRow]:
        return [row for row in self.rows if not row.result.success]

    def aggregate(self, mode: Mode) -> dict | None:
        rows = [r.result for r in self.rows if r.result.mode is mode and r.result.success]
        if not rows:
            return None
        dist = [r.distance for r in rows]
        off = [r.offset_deg for r in rows]
        mag = [abs(o) for o in off]
        return {
            "n": len(rows),
            "distance": (min(dist), max(dist), sum(dist) / len(dist)),
            "offset": (min(off), max(off), sum(off) / len(off)),
            "offset_abs": (min(mag), max(mag), sum(mag) / len(mag)),
        }

    def summary(self) -> str:
        lines = [f"approaches: {len(self.rows)}  success: {len(self.rows) - len(self.failures)}  "
                 f"failed: {len(self.failures)}"]
        for mode in (Mode.UNIDIRECTIONAL, Mode.BIDIRECTIONAL):
            agg = self.aggregate(mode)
            if agg is None:
                lines.append(f"{mode.value}: no successful approaches")
                continue
            d, o, a = agg["distance"], agg["offset"], agg["offset_abs"]
            lines.append(f"{mode.value}: n={agg['n']}")
            lines.append(f"  distance_m   min={d[0]:.3f} max={d[1]:.3f} mean={d[2]:.3f}")
            lines.append(f"  offset_deg   min={o[0]:.1f} max={o[1]:.1f} mean={o[2]:.1f}")
            lines.append(f"  |offset_deg| min={a[0]:.1f} max={a[1]:.1f} mean={a[2]:.1f}")
        for row in self.failures:
            lines.append(f"FAILED round {row.round} human {row.human} ({row.name}): {row.result.reason}")
        return "\n".join(lines) + "\n"


def run_scenario(sc: Scenario, rounds: int | None = None) -> RunReport:
    """Visit the people in file order each round.

    Each approach starts where the previous one ended.
    """
    costmap = sc.costmap
    robot = sc.robot
    config = sc.replan
    report = RunReport()
    humans = sc.humans
    for rnd in range(rounds if rounds is not None else sc.rounds):
        for i, human in enumerate(humans):
            result = run_approach(costmap, robot, human, sc.params_for(i), config)
            report.rows.append(ApproachRow(rnd, i, sc.human_name(i), result))
            robot = result.robot
    return report


def write_report(report: RunReport, out_dir) -> None:
    out_dir = Path(out_dir)
    traj_dir = out_dir / "trajectories"
    traj_dir.mkdir(parents=True, exist_ok=True)
    with (out_dir / "results.csv").open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_HEADER)
        for row in report.rows:
            writer.writerow(row.csv_row())
            write_trajectory_csv(traj_dir / f"round{row.round:02d}_human{row.human}.csv", row.result.trajectory)
    (out_dir / "summary.txt").write_text(report.summary())


def read_final_poses(path) -> list[tuple[float, float, float]]:
    """Final robot poses of the successful rows of a ``results.csv``."""
    poses = []
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            if row["success"] == "1":
                poses.append((float(row["final_x_m"]), float(row["final_y_m"]), float(row["final_theta_rad"])))
    return poses


def final_poses(report: RunReport) -> list[tuple[float, float, float]]:
    return [(r.result.robot.x, r.result.robot.y, r.result.robot.theta) for r in report.rows if r.result.success]

