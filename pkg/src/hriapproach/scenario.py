"""Scenario files: JSON with units in the key names, degrees on disk.

A scenario keeps its normalized file-level dict (defaults filled in) so that
parse -> serialize -> parse is exact; the runtime objects (costmap, robot,
per-person parameters) are derived from it on demand.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path

from hriapproach.errors import InvalidParameter, ParseError
from hriapproach.gridmap import Costmap, GridMap, inflate, load_map, load_pgm_map
from hriapproach.planner import ReplanConfig, RobotState
from hriapproach.search_area import ApproachParams, HumanPose, Mode, Posture

# file key -> (runtime field, unit conversion)
_PARAM_KEYS = {
    "r_min_m": ("r_min", float),
    "r_max_m": ("r_max", float),
    "alpha1_deg": ("alpha1", math.radians),
    "alpha2_deg": ("alpha2", math.radians),
    "alpha_mean_deg": ("alpha_mean", math.radians),
    "m_cm": ("m_cm", float),
    "m_path": ("m_path", float),
    "m_dist": ("m_dist", float),
    "m_angle": ("m_angle", float),
    "r_opt_m": ("r_opt", float),
    "mode": ("mode", Mode),
    "connectivity": ("connectivity", int),
    "k_cap": ("k_cap", float),
}
_PARAM_DEFAULTS = {
    "r_min_m": 0.45, "r_max_m": 0.9, "alpha1_deg": 90.0, "alpha2_deg": 90.0, "alpha_mean_deg": 0.0,
    "m_cm": 0.01, "m_path": 1.0, "m_dist": 1.0, "m_angle": 1.0, "r_opt_m": 0.0,
    "mode": "auto", "connectivity": 4, "k_cap": 3.0,
}
_ROBOT_DEFAULTS = {"x_m": None, "y_m": None, "theta_deg": 0.0, "v_max_mps": 0.4, "omega_max_dps": 60.0}
_REPLAN_DEFAULTS = {"rate_hz": 2.0, "goal_switch_epsilon": 0.0, "pos_tol_m": 0.05,
                    "angle_tol_deg": 5.0, "max_duration_s": 120.0}
_COSTMAP_DEFAULTS = {"robot_radius_m": 0.25, "inflation_radius_m": 0.6}
_HUMAN_DEFAULTS = {"name": None, "x_m": None, "y_m": None, "phi_deg": 0.0, "posture": "standing", "params": {}}
_TOP_KEYS = {"description", "map", "costmap", "robot", "params", "replan", "humans", "rounds"}


def _fill(section: str, given, defaults: dict) -> dict:
    if not isinstance(given, dict):
        raise ParseError(f"'{section}' must be an object")
    unknown = set(given) - set(defaults)
    if unknown:
        raise ParseError(f"unknown key(s) in '{section}': {sorted(unknown)}")
    out = {}
    for key, default in defaults.items():
        if key in given:
            out[key] = given[key]
        elif default is None:
            raise ParseError(f"missing required key '{section}.{key}'")
        else:
            out[key] = copy.deepcopy(default)
    return out


def _num(section: str, d: dict, *keys: str) -> None:
    for k in keys:
        v = d[k]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(f"'{section}.{k}' must be a number, got {v!r}")


def params_from_file(d: dict, base: ApproachParams | None = None) -> ApproachParams:
    """Convert (possibly partial) file-level params to :class:`ApproachParams`."""
    kwargs = {}
    for key, value in d.items():
        name, conv = _PARAM_KEYS[key]
        kwargs[name] = conv(value)
    return replace(base, **kwargs) if base is not None else ApproachParams(**kwargs)


@dataclass(eq=False)
class Scenario:
    data: dict
    base_dir: Path = field(default_factory=Path)

    def __eq__(self, other):
        return isinstance(other, Scenario) and self.data == other.data and self.gridmap == other.gridmap

    @cached_property
    def gridmap(self) -> GridMap:
        m = self.data["map"]
        if "grid" in m:
            return GridMap.from_rows(m["grid"], float(m["resolution_m"]), (m["origin_x_m"], m["origin_y_m"]))
        if "file" in m:
            return load_map(self.base_dir / m["file"])
        return load_pgm_map(self.base_dir / m["pgm"], float(m["resolution_m"]), (m["origin_x_m"], m["origin_y_m"]))

    @cached_property
    def costmap(self) -> Costmap:
        c = self.data["costmap"]
        return inflate(self.gridmap, c["robot_radius_m"], c["inflation_radius_m"])

    @property
    def rounds(self) -> int:
        return self.data["rounds"]

    @property
    def robot(self) -> RobotState:
        r = self.data["robot"]
        return RobotState(float(r["x_m"]), float(r["y_m"]), math.radians(r["theta_deg"]),
                          float(r["v_max_mps"]), math.radians(r["omega_max_dps"]))

    @property
    def replan(self) -> ReplanConfig:
        r = self.data["replan"]
        return ReplanConfig(float(r["rate_hz"]), float(r["goal_switch_epsilon"]), float(r["pos_tol_m"]),
                            math.radians(r["angle_tol_deg"]), float(r["max_duration_s"]))

    @property
    def params(self) -> ApproachParams:
        return params_from_file(self.data["params"])

    @property
    def humans(self) -> list[HumanPose]:
        return [HumanPose(float(h["x_m"]), float(h["y_m"]), math.radians(h["phi_deg"]), Posture(h["posture"]))
                for h in self.data["humans"]]

    def human_name(self, i: int) -> str:
        return self.data["humans"][i]["name"]

    def params_for(self, i: int) -> ApproachParams:
        return params_from_file(self.data["humans"][i]["params"], self.params)

    def validate(self) -> None:
        """Check poses against the map: everything in bounds, the robot on a free cell."""
        cm = self.costmap
        robot = self.robot
        cell = cm.world_to_cell(robot.x, robot.y)
        if cm.is_lethal(cell):
            raise InvalidParameter(f"robot start {robot.x, robot.y} is in a lethal cell")
        for i, h in enumerate(self.humans):
            cell = cm.world_to_cell(h.x, h.y)
            if self.gridmap.cells[cell.row, cell.col] != 0:
                raise InvalidParameter(f"human {i} ({self.human_name(i)}) is not on a free cell")
            self.params_for(i)


def parse_scenario(obj: dict, base_dir=".") -> Scenario:
    if not isinstance(obj, dict):
        raise ParseError("scenario must be a JSON object")
    unknown = set(obj) - _TOP_KEYS
    if unknown:
        raise ParseError(f"unknown top-level key(s): {sorted(unknown)}")
    for key in ("map", "robot", "humans"):
        if key not in obj:
            raise ParseError(f"missing required key '{key}'")
    data = {}
    if "description" in obj:
        if not isinstance(obj["description"], (str, list)):
            raise ParseError("'description' must be a string or list of strings")
        data["description"] = obj["description"]

    m = obj["map"]
    if not isinstance(m, dict):
        raise ParseError("'map' must be an object")
    if "grid" in m:
        data["map"] = _fill("map", m, {"grid": None, "resolution_m": None, "origin_x_m": 0.0, "origin_y_m": 0.0})
        if not isinstance(m["grid"], list) or not all(isinstance(r, str) for r in m["grid"]):
            raise ParseError("'map.grid' must be a list of strings")
    elif "file" in m:
        data["map"] = _fill("map", m, {"file": None})
    elif "pgm" in m:
        data["map"] = _fill("map", m, {"pgm": None, "resolution_m": None, "origin_x_m": 0.0, "origin_y_m": 0.0})
    else:
        raise ParseError("'map' needs one of 'grid', 'file' or 'pgm'")

    data["costmap"] = _fill("costmap", obj.get("costmap", {}), _COSTMAP_DEFAULTS)
    _num("costmap", data["costmap"], *_COSTMAP_DEFAULTS)
    data["robot"] = _fill("robot", obj["robot"], _ROBOT_DEFAULTS)
    _num("robot", data["robot"], *_ROBOT_DEFAULTS)
    data["params"] = _fill("params", obj.get("params", {}), _PARAM_DEFAULTS)
    data["replan"] = _fill("replan", obj.get("replan", {}), _REPLAN_DEFAULTS)
    _num("replan", data["replan"], *_REPLAN_DEFAULTS)

    humans = obj["humans"]
    if not isinstance(humans, list):
        raise ParseError("'humans' must be a list")
    data["humans"] = []
    for i, h in enumerate(humans):
        entry = _fill(f"humans[{i}]", h, {**_HUMAN_DEFAULTS, "name": f"human{i}"})
        _num(f"humans[{i}]", entry, "x_m", "y_m", "phi_deg")
        overrides = entry["params"]
        if not isinstance(overrides, dict) or set(overrides) - set(_PARAM_KEYS):
            raise ParseError(f"bad 'humans[{i}].params': allowed keys are {sorted(_PARAM_KEYS)}")
        data["humans"].append(entry)

    rounds = obj.get("rounds", 1)
    if isinstance(rounds, bool) or not isinstance(rounds, int) or rounds < 1:
        raise ParseError("'rounds' must be an integer >= 1")
    data["rounds"] = rounds

    sc = Scenario(data, Path(base_dir))
    try:
        sc.params
        for i in range(len(data["humans"])):
            sc.params_for(i)
            Posture(data["humans"][i]["posture"])
        sc.robot, sc.replan
    except (ValueError, KeyError) as exc:
        raise ParseError(f"invalid scenario value: {exc}") from None
    return sc


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, offset=exc.colno - 1) from None
    except OSError as exc:
        raise ParseError(f"cannot read scenario: {exc}") from None
    return parse_scenario(obj, path.parent)


def dumps_scenario(sc: Scenario) -> str:
    return json.dumps(sc.data, indent=2) + "\n"


def save_scenario(sc: Scenario, path) -> None:
    Path(path).write_text(dumps_scenario(sc))
