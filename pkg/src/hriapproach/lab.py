"""Hand-built stand-in for the lab used in the approach experiments.

An 8 m x 6 m room at 0.05 m/cell.  A sofa with backrest and armrests stands
against the north wall with two seated people facing south; their feet are
small obstacles in front of them.  A 1.6 m x 1.2 m table in the east half has
three seated people (west, south and north sides) facing it, each with a
chair back behind them.  Sofa people are approached head-on
(unidirectional, sector center 0 deg); table people from the sides
(bidirectional, sector centers +/-60 deg).
"""

from __future__ import annotations

import numpy as np

from hriapproach.gridmap import FREE, OCCUPIED, GridMap
from hriapproach.scenario import Scenario, parse_scenario

RESOLUTION = 0.05
WIDTH, HEIGHT = 160, 120

# (x0, y0, x1, y1) in meters, inclusive of every cell whose center lies inside
FURNITURE = {
    "sofa_back": (0.80, 5.45, 3.20, 5.70),
    "sofa_arm_west": (0.80, 4.90, 0.95, 5.70),
    "sofa_arm_east": (3.05, 4.90, 3.20, 5.70),
    "feet_1": (1.55, 4.75, 1.65, 4.80),
    "feet_2": (2.35, 4.75, 2.45, 4.80),
    "table": (5.00, 1.70, 6.60, 2.90),
    "chair_west": (4.25, 2.05, 4.30, 2.55),
    "chair_south": (5.55, 0.95, 6.05, 1.00),
    "chair_north": (5.55, 3.60, 6.05, 3.65),
    "cabinet": (3.60, 0.05, 4.40, 0.40),
}

HUMANS = [
    {"name": "sofa_1", "x_m": 1.6, "y_m": 5.15, "phi_deg": -90.0, "posture": "sitting",
     "params": {"mode": "unidirectional", "alpha_mean_deg": 0.0}},
    {"name": "sofa_2", "x_m": 2.4, "y_m": 5.15, "phi_deg": -90.0, "posture": "sitting",
     "params": {"mode": "unidirectional", "alpha_mean_deg": 0.0}},
    {"name": "table_west", "x_m": 4.6, "y_m": 2.3, "phi_deg": 0.0, "posture": "sitting",
     "params": {"mode": "bidirectional", "alpha_mean_deg": 60.0}},
    {"name": "table_south", "x_m": 5.8, "y_m": 1.3, "phi_deg": 90.0, "posture": "sitting",
     "params": {"mode": "bidirectional", "alpha_mean_deg": 60.0}},
    {"name": "table_north", "x_m": 5.8, "y_m": 3.3, "phi_deg": -90.0, "posture": "sitting",
     "params": {"mode": "bidirectional", "alpha_mean_deg": 60.0}},
]

PARAMS = {
    "r_min_m": 0.45, "r_max_m": 0.9, "alpha1_deg": 90.0, "alpha2_deg": 90.0, "alpha_mean_deg": 0.0,
    "m_cm": 0.01, "m_path": 0.5, "m_dist": 4.0, "m_angle": 3.0, "r_opt_m": 0.6,
    "mode": "auto", "connectivity": 4, "k_cap": 3.0,
}


def lab_gridmap() -> GridMap:
    cells = np.full((HEIGHT, WIDTH), FREE, np.uint8)
    cells[0, :] = cells[-1, :] = OCCUPIED
    cells[:, 0] = cells[:, -1] = OCCUPIED
    xs = np.arange(WIDTH) * RESOLUTION
    ys = np.arange(HEIGHT) * RESOLUTION
    eps = 1e-9
    for x0, y0, x1, y1 in FURNITURE.values():
        cols = (xs >= x0 - eps) & (xs <= x1 + eps)
        rows = (ys >= y0 - eps) & (ys <= y1 + eps)
        cells[np.ix_(rows, cols)] = OCCUPIED
    return GridMap(WIDTH, HEIGHT, RESOLUTION, (0.0, 0.0), cells)


def lab_scenario_dict(rounds: int = 10) -> dict:
    gmap = lab_gridmap()
    return {
        "description": [line.strip() for line in __doc__.strip().splitlines()]
        + ["Furniture rectangles (x0, y0, x1, y1) in meters:"]
        + [f"  {k}: {v}" for k, v in FURNITURE.items()]
        + ["map.grid lists row 0 (y = 0) first."],
        "map": {"grid": gmap.to_rows(), "resolution_m": RESOLUTION, "origin_x_m": 0.0, "origin_y_m": 0.0},
        "costmap": {"robot_radius_m": 0.25, "inflation_radius_m": 0.6},
        "robot": {"x_m": 3.0, "y_m": 1.0, "theta_deg": 0.0, "v_max_mps": 0.4, "omega_max_dps": 60.0},
        "params": dict(PARAMS),
        "replan": {"rate_hz": 2.0, "goal_switch_epsilon": 0.0, "pos_tol_m": 0.05,
                   "angle_tol_deg": 5.0, "max_duration_s": 120.0},
        "humans": [dict(h, params=dict(h["params"])) for h in HUMANS],
        "rounds": rounds,
    }


def lab_scenario(rounds: int = 10) -> Scenario:
    return parse_scenario(lab_scenario_dict(rounds))


def shipped_lab_path():
    from importlib.resources import files
    return files("hriapproach") / "data" / "lab_analog.json"

