"""Simulated approach: replan the goal every tick and move a holonomic point
robot along the wavefront path toward it."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Union

from hriapproach.cost_engine import GoalPose, PlanDiagnostics, backtrack_path, goal_pose, plan_once
from hriapproach.errors import InvalidParameter, NoGoalFound
from hriapproach.gridmap import Costmap
from hriapproach.search_area import ApproachParams, CandidateCell, HumanPose, Mode, resolve_mode, wrap_angle

HumanSource = Union[HumanPose, Callable[[float], HumanPose]]

TRAJECTORY_HEADER = ["tick", "t_s", "x_m", "y_m", "theta_rad", "goal_x_m", "goal_y_m",
                     "goal_alpha_rad", "total_cost"]


@dataclass(frozen=True)
class RobotState:
    x: float
    y: float
    theta: float = 0.0
    v_max: float = 0.4
    omega_max: float = 1.0


@dataclass(frozen=True)
class ReplanConfig:
    rate: float = 2.0
    goal_switch_epsilon: float = 0.0
    pos_tol: float = 0.05
    angle_tol: float = math.radians(5.0)
    max_duration: float = 120.0

    def __post_init__(self):
        if not self.rate > 0:
            raise InvalidParameter("rate must be > 0")
        if not (self.pos_tol > 0 and self.angle_tol > 0):
            raise InvalidParameter("arrival tolerances must be > 0")
        if self.goal_switch_epsilon < 0:
            raise InvalidParameter("goal_switch_epsilon must be >= 0")

    @property
    def dt(self) -> float:
        return 1.0 / self.rate


@dataclass
class TickResult:
    robot: RobotState
    goal: GoalPose | None
    target: CandidateCell | None
    arrived: bool
    failure: NoGoalFound | None = None
    diagnostics: PlanDiagnostics | None = None

    @property
    def total_cost(self) -> float | None:
        return None if self.target is None else self.target.total


@dataclass(frozen=True)
class TrajectoryPoint:
    tick: int
    t: float
    x: float
    y: float
    theta: float
    goal: GoalPose | None = None
    total_cost: float | None = None


@dataclass
class ApproachResult:
    success: bool
    robot: RobotState
    distance: float
    offset_deg: float
    ticks: int
    mode: Mode
    trajectory: list[TrajectoryPoint] = field(default_factory=list)
    reason: str = ""
    lethal_violations: int = 0
    goal_changes: int = 0


def _choose(diag: PlanDiagnostics, previous: CandidateCell | None, epsilon: float) -> CandidateCell:
    best = diag.best
    if previous is None or previous.cell == best.cell:
        return best
    for cand in diag.stages["angle"]:
        if cand.cell == previous.cell:
            return best if best.total < cand.total - epsilon else cand
    return best


def _advance(robot: RobotState, waypoints: list[tuple[float, float]], budget: float) -> RobotState:
    x, y = robot.x, robot.y
    for wx, wy in waypoints:
        seg = math.hypot(wx - x, wy - y)
        if seg <= budget:
            x, y = wx, wy
            budget -= seg
        else:
            f = budget / seg
            x, y = x + (wx - x) * f, y + (wy - y) * f
            break
    return replace(robot, x=x, y=y)


def tick(costmap: Costmap, robot: RobotState, human: HumanPose, params: ApproachParams,
         config: ReplanConfig, previous: CandidateCell | None = None) -> TickResult:
    """Replan once, then move for one period ``1 / config.rate``.

    ``previous`` is the candidate targeted on the last tick; it is kept unless
    the new best beats its current total by more than the switch epsilon.
    A failed plan leaves the robot where it is.
    """
    dt = config.dt
    diag = PlanDiagnostics(costmap.shape)
    try:
        plan_once(costmap, (robot.x, robot.y), human, params, diag)
    except NoGoalFound as exc:
        return TickResult(robot, None, None, False, exc, diag)

    target = _choose(diag, previous, config.goal_switch_epsilon)
    goal = goal_pose(target, human, costmap)
    path = backtrack_path(diag.depth, target.cell, params.connectivity)
    waypoints = [costmap.cell_to_world(c) for c in path[1:]] or [(goal.x, goal.y)]
    moved = _advance(robot, waypoints, robot.v_max * dt)

    if math.hypot(goal.x - moved.x, goal.y - moved.y) <= config.pos_tol:
        err = wrap_angle(goal.alpha - moved.theta)
        step = max(-moved.omega_max * dt, min(moved.omega_max * dt, err))
        moved = replace(moved, theta=wrap_angle(moved.theta + step))
    arrived = (math.hypot(goal.x - moved.x, goal.y - moved.y) <= config.pos_tol
               and abs(wrap_angle(goal.alpha - moved.theta)) <= config.angle_tol)
    return TickResult(moved, goal, target, arrived, None, diag)


def human_frame_metrics(robot: RobotState, human: HumanPose) -> tuple[float, float]:
    """Distance (m) and bearing of the robot relative to the person's heading (deg)."""
    dx, dy = robot.x - human.x, robot.y - human.y
    return math.hypot(dx, dy), math.degrees(wrap_angle(math.atan2(dy, dx) - human.heading))


def run_approach(costmap: Costmap, robot: RobotState, human: HumanSource, params: ApproachParams,
                 config: ReplanConfig = ReplanConfig()) -> ApproachResult:
    """Tick until the robot arrives or ``config.max_duration`` elapses.

    ``human`` may be a fixed pose or a function of simulated time.
    """
    human_at = human if callable(human) else (lambda t, h=human: h)
    dt = config.dt
    max_ticks = max(1, math.ceil(config.max_duration * config.rate - 1e-9))
    trajectory = [TrajectoryPoint(0, 0.0, robot.x, robot.y, robot.theta)]
    previous = None
    violations = changes = 0
    last_failure = None
    arrived = False
    k = 0
    for k in range(1, max_ticks + 1):
        h = human_at(k * dt)
        res = tick(costmap, robot, h, params, config, previous)
        robot = res.robot
        if costmap.is_lethal(costmap.world_to_cell(robot.x, robot.y)):
            violations += 1
        if res.target is not None and previous is not None and res.target.cell != previous.cell:
            changes += 1
        if res.target is not None:
            previous = res.target
        last_failure = res.failure
        trajectory.append(TrajectoryPoint(k, k * dt, robot.x, robot.y, robot.theta, res.goal, res.total_cost))
        if res.arrived:
            arrived = True
            break

    final_human = human_at(k * dt)
    distance, offset = human_frame_metrics(robot, final_human)
    if arrived:
        reason = ""
    elif last_failure is not None:
        reason = f"timeout: no reachable goal (stage={last_failure.stage})"
    else:
        reason = "timeout"
    return ApproachResult(arrived, robot, distance, offset, k, resolve_mode(final_human, params),
                          trajectory, reason, violations, changes)


def _fmt(v: float | None) -> str:
    return "" if v is None else f"{v:.6f}"


def write_trajectory_csv(path, trajectory: list[TrajectoryPoint]) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER)
        for p in trajectory:
            g = p.goal
            writer.writerow([p.tick, _fmt(p.t), _fmt(p.x), _fmt(p.y), _fmt(p.theta),
                             _fmt(g and g.x), _fmt(g and g.y), _fmt(g and g.alpha), _fmt(p.total_cost)])
