"""Rate candidate cells and pick the goal pose.

The pipeline runs search area -> costmap cost -> reachability and path cost
(one multi-goal wavefront from the robot) -> distance cost -> angle cost ->
argmin -> goal pose.  Each stage returns a new list and never adds cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from hriapproach import kernels
from hriapproach.errors import DegenerateGeometry, NoGoalFound, RobotInLethalCell
from hriapproach.gridmap import CellIndex, Costmap
from hriapproach.search_area import (
    ApproachParams,
    CandidateCell,
    HumanPose,
    define_search_area,
    relative_sectors,
    wrap_angle,
)

STAGE_NAMES = ("search_area", "costmap", "path", "distance", "angle", "total")
TIE_RTOL = 1e-9


@dataclass(frozen=True)
class CostBreakdown:
    c_cm: float
    c_path: float
    c_dist: float
    c_angle: float
    total: float

    @classmethod
    def of(cls, cand: CandidateCell) -> CostBreakdown:
        return cls(cand.c_cm, cand.c_path, cand.c_dist, cand.c_angle, cand.total)


@dataclass(frozen=True)
class GoalPose:
    x: float
    y: float
    alpha: float


@dataclass
class PlanDiagnostics:
    """What each stage kept, for inspection and for rendering the layers."""

    shape: tuple[int, int]
    stages: dict[str, list[CandidateCell]] = field(default_factory=dict)
    best: CandidateCell | None = None
    breakdown: CostBreakdown | None = None
    depth: np.ndarray | None = None
    robot_cell: CellIndex | None = None
    failed_stage: str | None = None

    @property
    def sizes(self) -> dict[str, int]:
        return {name: len(cells) for name, cells in self.stages.items()}

    def layer(self, name: str) -> np.ndarray:
        """Float grid of one stage, NaN outside the surviving set."""
        grid = np.full(self.shape, np.nan)
        cells = self.stages.get(name if name != "total" else "angle", [])
        for cand in cells:
            if name == "search_area":
                v = 1.0
            elif name == "costmap":
                v = cand.c_cm
            elif name == "path":
                v = cand.c_path
            elif name == "distance":
                v = cand.c_dist
            elif name == "angle":
                v = cand.c_angle
            else:
                v = cand.total
            grid[cand.cell.row, cand.cell.col] = v
        return grid


def costmap_cost(cands: list[CandidateCell], costmap: Costmap, m_cm: float) -> list[CandidateCell]:
    """Attach ``C(x_i, y_i) * m_cm`` and drop lethal cells."""
    out = []
    cost = costmap.cost
    lethal = costmap.lethal_threshold
    for cand in cands:
        c = int(cost[cand.cell.row, cand.cell.col])
        if c < lethal:
            out.append(cand.evolve(c_cm=c * m_cm))
    return out


def depth_cap(costmap: Costmap, robot_xy: tuple[float, float], human: HumanPose,
              params: ApproachParams) -> int:
    """Deepest wavefront level worth exploring, in cells."""
    dist = math.hypot(robot_xy[0] - human.x, robot_xy[1] - human.y)
    return math.ceil(params.k_cap * (dist + params.r_max) / costmap.resolution)


def multi_goal_bfs(costmap: Costmap, robot_cell: CellIndex, cands: list[CandidateCell],
                   m_path: float = 1.0, cap: int = -1, connectivity: int = 4,
                   ) -> tuple[list[CandidateCell], np.ndarray]:
    """One wavefront from the robot rates every candidate at once.

    Returns the reached candidates with ``c_path = depth * resolution * m_path``
    and the depth field (-1 where not reached).  ``cap`` < 0 disables the
    depth limit.
    """
    if costmap.is_lethal(robot_cell):
        raise RobotInLethalCell(f"robot cell {tuple(robot_cell)} is lethal")
    goals = np.fromiter((costmap.flat_index(c.cell) for c in cands), dtype=np.int64, count=len(cands))
    depth = kernels.wavefront(costmap.passable(), costmap.flat_index(robot_cell), goals,
                              int(cap), int(connectivity))
    res = costmap.resolution
    out = []
    for cand in cands:
        d = int(depth[cand.cell.row, cand.cell.col])
        if d >= 0:
            out.append(cand.evolve(c_path=d * res * m_path, reachable=True, path_cells=d))
    return out, depth


def distance_cost(cands: list[CandidateCell], m_dist: float, r_opt: float = 0.0) -> list[CandidateCell]:
    return [c.evolve(c_dist=abs(c.r - r_opt) * m_dist) for c in cands]


def angle_cost(cands: list[CandidateCell], sectors: list[tuple[float, float]],
               m_angle: float) -> list[CandidateCell]:
    """``sectors`` are (center, half_width) in the person's frame, like ``alpha``."""
    centers = [c for c, _ in sectors]
    return [
        cand.evolve(c_angle=min(abs(wrap_angle(c - cand.alpha)) for c in centers) * m_angle)
        for cand in cands
    ]


def select_best(cands: list[CandidateCell], width: int | None = None) -> tuple[CandidateCell, CostBreakdown]:
    """Lowest total wins; ties go to the shorter path, then the lower row-major index."""
    if not cands:
        raise NoGoalFound("select", "cannot select from an empty candidate set")
    if width is None:
        width = max(c.cell.col for c in cands) + 1
    # totals within a relative TIE_RTOL count as equal, so rounding in the
    # weighted sum cannot decide between cells of the same cost
    lowest = min(c.total for c in cands)
    tied = [c for c in cands if c.total <= lowest + TIE_RTOL * abs(lowest)]
    best = min(tied, key=lambda c: (c.c_path, c.cell.row * width + c.cell.col))
    return best, CostBreakdown.of(best)


def goal_pose(best: CandidateCell, human: HumanPose, costmap: Costmap) -> GoalPose:
    """Center of the chosen cell, facing the person's center."""
    x, y = costmap.cell_to_world(best.cell)
    if best.cell == costmap.world_to_cell(human.x, human.y) or (x == human.x and y == human.y):
        raise DegenerateGeometry("goal cell coincides with the person")
    return GoalPose(x, y, wrap_angle(math.atan2(human.y - y, human.x - x)))


def plan_once(costmap: Costmap, robot_xy: tuple[float, float], human: HumanPose,
              params: ApproachParams, diagnostics: PlanDiagnostics | None = None,
              ) -> tuple[GoalPose, PlanDiagnostics]:
    """Run the whole pipeline once.

    Raises :class:`NoGoalFound` naming the stage that emptied the candidate
    set; pass a ``diagnostics`` object to inspect the partial stages then.
    """
    diag = diagnostics if diagnostics is not None else PlanDiagnostics(costmap.shape)
    robot_cell = costmap.world_to_cell(*robot_xy)
    diag.robot_cell = robot_cell

    def fail(stage):
        diag.failed_stage = stage
        raise NoGoalFound(stage)

    s = define_search_area(costmap, human, params)
    diag.stages["search_area"] = s
    if not s:
        fail("search_area")
    s = costmap_cost(s, costmap, params.m_cm)
    diag.stages["costmap"] = s
    if not s:
        fail("costmap")
    s, depth = multi_goal_bfs(costmap, robot_cell, s, params.m_path,
                              depth_cap(costmap, robot_xy, human, params), params.connectivity)
    diag.depth = depth
    diag.stages["path"] = s
    if not s:
        fail("path")
    s = distance_cost(s, params.m_dist, params.r_opt)
    diag.stages["distance"] = s
    s = angle_cost(s, relative_sectors(human, params), params.m_angle)
    diag.stages["angle"] = s
    best, breakdown = select_best(s, costmap.width)
    diag.best, diag.breakdown = best, breakdown
    return goal_pose(best, human, costmap), diag


def backtrack_path(depth: np.ndarray, goal: CellIndex, connectivity: int = 4) -> list[CellIndex]:
    """Cells from the wavefront source to ``goal`` (both included).

    At each step the first neighbor one level shallower is taken, in the
    fixed order E, N, W, S (then diagonals), so paths are deterministic.
    """
    h, w = depth.shape
    d = int(depth[goal.row, goal.col])
    if d < 0:
        raise ValueError(f"cell {tuple(goal)} was not reached")
    steps = ((1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1))[:connectivity]
    path = [goal]
    col, row = goal
    while d > 0:
        for dx, dy in steps:
            nc, nr = col + dx, row + dy
            if 0 <= nc < w and 0 <= nr < h and depth[nr, nc] == d - 1:
                col, row, d = nc, nr, d - 1
                path.append(CellIndex(col, row))
                break
        else:  # pragma: no cover - impossible for a valid wavefront
            raise ValueError("broken wavefront")
    path.reverse()
    return path


# --- diagnostics export -----------------------------------------------------

def normalize_layer(layer: np.ndarray, mask_only: bool = False) -> np.ndarray:
    """Min-max scale finite values to 1..255; cells outside the set are 0."""
    out = np.zeros(layer.shape, np.uint8)
    finite = np.isfinite(layer)
    if not finite.any():
        return out
    if mask_only:
        out[finite] = 255
        return out
    vals = layer[finite]
    lo, hi = float(vals.min()), float(vals.max())
    if hi > lo:
        out[finite] = np.floor(1.0 + 254.0 * (vals - lo) / (hi - lo) + 0.5).astype(np.uint8)
    else:
        out[finite] = 255
    return out


def write_pgm_ascii(path, image: np.ndarray) -> None:
    """Plain PGM (P2), top image row = highest map row."""
    h, w = image.shape
    lines = [f"P2\n{w} {h}\n255"]
    for row in image[::-1]:
        lines.append(" ".join(str(int(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_pgm_ascii(path) -> np.ndarray:
    """Inverse of :func:`write_pgm_ascii` (returns row 0 = lowest map row)."""
    tokens = []
    for line in Path(path).read_text().splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    if tokens[0] != "P2":
        raise ValueError("not a plain PGM")
    w, h = int(tokens[1]), int(tokens[2])
    vals = np.array([int(t) for t in tokens[4:4 + w * h]], dtype=np.int64)
    return vals.reshape(h, w)[::-1]


def export_stages(diag: PlanDiagnostics, out_dir) -> list[Path]:
    """Write ``stage_{1..6}_{name}.pgm`` for the six pipeline layers."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, name in enumerate(STAGE_NAMES, start=1):
        img = normalize_layer(diag.layer(name), mask_only=(name == "search_area"))
        p = out_dir / f"stage_{i}_{name}.pgm"
        write_pgm_ascii(p, img)
        paths.append(p)
    return paths
