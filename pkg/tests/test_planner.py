import math

import numpy as np
import pytest

from hriapproach.cost_engine import plan_once
from hriapproach.errors import InvalidParameter
from hriapproach.gridmap import OCCUPIED, GridMap, inflate
from hriapproach.planner import (
    TRAJECTORY_HEADER,
    ReplanConfig,
    RobotState,
    human_frame_metrics,
    run_approach,
    tick,
    write_trajectory_csv,
)
from hriapproach.search_area import ApproachParams, HumanPose, wrap_angle

EMPTY = inflate(GridMap.empty(80, 80, 0.05), 0.1, 0.3)
PARAMS = ApproachParams(m_path=0.5, m_dist=4.0, m_angle=3.0, r_opt=0.6)


def test_config_validation():
    with pytest.raises(InvalidParameter):
        ReplanConfig(rate=0)
    with pytest.raises(InvalidParameter):
        ReplanConfig(pos_tol=0)
    assert ReplanConfig().dt == 0.5


def test_fixed_point_at_goal():
    human = HumanPose(2.0, 2.0, 0.0)
    goal, _ = plan_once(EMPTY, (0.5, 0.5), human, PARAMS)
    robot = RobotState(goal.x, goal.y, wrap_angle(goal.alpha + 0.8))
    res = tick(EMPTY, robot, human, PARAMS, ReplanConfig())
    assert (res.robot.x, res.robot.y) == (goal.x, goal.y)
    assert res.goal == goal
    # turning only, bounded by omega * dt
    assert res.robot.theta == pytest.approx(wrap_angle(goal.alpha + 0.3))
    assert not res.arrived
    res2 = tick(EMPTY, res.robot, human, PARAMS, ReplanConfig())
    assert res2.arrived
    assert wrap_angle(res2.robot.theta - goal.alpha) == pytest.approx(0.0, abs=1e-12)


def test_teleported_human_changes_goal():
    robot = RobotState(0.5, 0.5)
    first = tick(EMPTY, robot, HumanPose(2.0, 2.0, 0.0), PARAMS, ReplanConfig())
    second = tick(EMPTY, first.robot, HumanPose(3.0, 1.0, math.pi / 2), PARAMS, ReplanConfig(), first.target)
    assert second.goal != first.goal
    assert math.hypot(second.goal.x - 3.0, second.goal.y - 1.0) <= 0.95


def test_monotone_approach_on_empty_map():
    human = HumanPose(3.0, 2.0, math.pi)
    res = run_approach(EMPTY, RobotState(0.5, 0.5), human, PARAMS)
    assert res.success
    goal, _ = plan_once(EMPTY, (0.5, 0.5), human, PARAMS)
    d = [math.hypot(p.x - goal.x, p.y - goal.y) for p in res.trajectory]
    assert all(b <= a + 1e-12 for a, b in zip(d, d[1:]))
    assert PARAMS.r_min - 0.05 <= res.distance <= PARAMS.r_max + 0.05
    assert abs(res.offset_deg) <= 45 + 1e-6


def test_step_length_bounded_by_speed():
    res = run_approach(EMPTY, RobotState(0.5, 0.5, v_max=0.3), HumanPose(3.0, 3.0, -2.0), PARAMS)
    for a, b in zip(res.trajectory, res.trajectory[1:]):
        assert math.hypot(b.x - a.x, b.y - a.y) <= 0.3 * 0.5 + 1e-9


def test_infinite_epsilon_keeps_first_goal():
    cfg = ReplanConfig(goal_switch_epsilon=math.inf)
    res = run_approach(EMPTY, RobotState(0.4, 3.5), HumanPose(2.0, 2.0, 0.0, "sitting"),
                       ApproachParams(alpha_mean=math.radians(60), m_path=1.0, m_dist=0.1, m_angle=0.1), cfg)
    goals = {(p.goal.x, p.goal.y) for p in res.trajectory if p.goal}
    assert len(goals) == 1
    assert res.goal_changes == 0


def test_goal_changes_strictly_lower_cost():
    # costs depend on the robot's position through the path term, so the goal may move
    human = HumanPose(2.0, 2.0, 0.0, "sitting")
    params = ApproachParams(alpha_mean=math.radians(60), m_path=1.0, m_dist=0.1, m_angle=0.1)
    robot = RobotState(0.4, 3.5)
    prev = None
    switches = 0
    for _ in range(40):
        res = tick(EMPTY, robot, human, params, ReplanConfig(), prev)
        if prev is not None and res.target.cell != prev.cell:
            old = next(c for c in res.diagnostics.stages["angle"] if c.cell == prev.cell)
            assert res.target.total < old.total
            switches += 1
        prev, robot = res.target, res.robot
        if res.arrived:
            break
    assert res.arrived


def test_unreachable_human_fails_without_moving():
    cells = np.zeros((60, 60), np.uint8)
    cells[10:50, 10] = cells[10:50, 49] = OCCUPIED
    cells[10, 10:50] = cells[49, 10:50] = OCCUPIED
    cm = inflate(GridMap(60, 60, 0.05, (0, 0), cells), 0.1, 0.2)
    start = RobotState(0.1, 0.1)
    res = run_approach(cm, start, HumanPose(1.5, 1.5), ApproachParams(), ReplanConfig(max_duration=3))
    assert not res.success
    assert "stage=path" in res.reason
    assert {(p.x, p.y) for p in res.trajectory} == {(0.1, 0.1)}
    assert res.ticks == 6


def test_moving_human_is_tracked():
    def human_at(t):
        return HumanPose(2.0 + 0.05 * t, 2.0, math.pi)

    res = run_approach(EMPTY, RobotState(0.5, 0.5), human_at, PARAMS)
    assert res.success
    assert res.goal_changes > 0


def test_never_enters_lethal_cells():
    rng = np.random.default_rng(0)
    cells = (rng.random((80, 80)) < 0.02).astype(np.uint8)
    cells[8:14, 8:14] = 0
    cm = inflate(GridMap(80, 80, 0.05, (0, 0), cells), 0.1, 0.3)
    res = run_approach(cm, RobotState(0.55, 0.55), HumanPose(3.0, 3.0, -2.3), PARAMS)
    assert res.lethal_violations == 0
    for p in res.trajectory:
        assert not cm.is_lethal(cm.world_to_cell(p.x, p.y))


def test_deterministic_trajectory():
    a = run_approach(EMPTY, RobotState(0.5, 0.5), HumanPose(3.0, 2.0, 1.0), PARAMS)
    b = run_approach(EMPTY, RobotState(0.5, 0.5), HumanPose(3.0, 2.0, 1.0), PARAMS)
    assert a.trajectory == b.trajectory


def test_human_frame_metrics():
    d, off = human_frame_metrics(RobotState(1.0, 1.6), HumanPose(1.0, 1.0, 0.0))
    assert d == pytest.approx(0.6)
    assert off == pytest.approx(90.0)


def test_trajectory_csv(tmp_path):
    res = run_approach(EMPTY, RobotState(0.5, 0.5), HumanPose(2.0, 2.0, 0.0), PARAMS)
    p = tmp_path / "t.csv"
    write_trajectory_csv(p, res.trajectory)
    lines = p.read_text().splitlines()
    assert lines[0] == ",".join(TRAJECTORY_HEADER)
    assert lines[0] == "tick,t_s,x_m,y_m,theta_rad,goal_x_m,goal_y_m,goal_alpha_rad,total_cost"
    assert lines[1] == "0,0.000000,0.500000,0.500000,0.000000,,,,"
    assert len(lines) == len(res.trajectory) + 1
