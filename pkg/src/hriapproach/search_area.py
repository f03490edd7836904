"""Candidate goal cells around a person: rings between r_min and r_max,
filtered by the angular sectors the person can comfortably reach."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from hriapproach.errors import InvalidParameter
from hriapproach.gridmap import CellIndex, _Grid, ring_offsets

TAU = 2.0 * math.pi
# Slack for sector-edge comparisons (radians); far below one cell's angular size.
ANGLE_EPS = 1e-9


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    w = math.remainder(a, TAU)
    return math.pi if w == -math.pi else w


class Posture(str, Enum):
    STANDING = "standing"
    SITTING = "sitting"


class Mode(str, Enum):
    AUTO = "auto"
    UNIDIRECTIONAL = "unidirectional"
    BIDIRECTIONAL = "bidirectional"


@dataclass(frozen=True)
class HumanPose:
    x: float
    y: float
    heading: float = 0.0
    posture: Posture = Posture.STANDING

    def __post_init__(self):
        object.__setattr__(self, "heading", wrap_angle(self.heading))
        object.__setattr__(self, "posture", Posture(self.posture))


@dataclass(frozen=True)
class ApproachParams:
    """Search-area geometry and cost weights.  Angles are radians.

    ``alpha1``/``alpha2`` are the *full* widths of the unidirectional and
    bidirectional sectors; ``alpha_mean`` offsets the sector center(s) from
    the person's heading.  ``mode`` overrides the posture-based choice.
    """

    r_min: float = 0.45
    r_max: float = 0.9
    alpha1: float = math.pi / 2
    alpha2: float = math.pi / 2
    alpha_mean: float = 0.0
    m_cm: float = 0.01
    m_path: float = 1.0
    m_dist: float = 1.0
    m_angle: float = 1.0
    r_opt: float = 0.0
    mode: Mode = Mode.AUTO
    connectivity: int = 4
    k_cap: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        self.validate()

    def validate(self) -> None:
        if not 0 < self.r_min:
            raise InvalidParameter(f"r_min must be > 0, got {self.r_min}")
        if self.r_min > self.r_max:
            raise InvalidParameter(f"r_min ({self.r_min}) > r_max ({self.r_max})")
        for name in ("alpha1", "alpha2"):
            v = getattr(self, name)
            if not 0 < v <= TAU + ANGLE_EPS:
                raise InvalidParameter(f"{name} must lie in (0, 2*pi], got {v}")
        for name in ("m_cm", "m_path", "m_dist", "m_angle", "r_opt"):
            if getattr(self, name) < 0:
                raise InvalidParameter(f"{name} must be >= 0")
        if self.connectivity not in (4, 8):
            raise InvalidParameter("connectivity must be 4 or 8")
        if not self.k_cap > 0:
            raise InvalidParameter("k_cap must be > 0")

    def scaled(self, k: float) -> ApproachParams:
        """Copy with all four influence factors multiplied by ``k``."""
        return replace(self, m_cm=self.m_cm * k, m_path=self.m_path * k,
                       m_dist=self.m_dist * k, m_angle=self.m_angle * k)


@dataclass(slots=True)
class CandidateCell:
    """One member of the candidate container.

    ``r`` is the distance to the person's center in meters and ``alpha`` the
    bearing of the cell center relative to the person's heading, in
    (-pi, pi].  Cost fields stay ``None`` until the matching stage has run.
    Pipeline stages never mutate a candidate; they build updated copies.
    """

    cell: CellIndex
    r: float
    alpha: float
    c_cm: float | None = None
    c_path: float | None = None
    c_dist: float | None = None
    c_angle: float | None = None
    reachable: bool = False
    path_cells: int | None = field(default=None, compare=False)

    @property
    def total(self) -> float:
        return self.c_cm + self.c_path + self.c_dist + self.c_angle

    def evolve(self, **changes) -> CandidateCell:
        new = CandidateCell(self.cell, self.r, self.alpha, self.c_cm, self.c_path,
                            self.c_dist, self.c_angle, self.reachable, self.path_cells)
        for k, v in changes.items():
            setattr(new, k, v)
        return new


def resolve_mode(human: HumanPose, params: ApproachParams) -> Mode:
    if params.mode is not Mode.AUTO:
        return params.mode
    return Mode.UNIDIRECTIONAL if human.posture is Posture.STANDING else Mode.BIDIRECTIONAL


def relative_sectors(human: HumanPose, params: ApproachParams) -> list[tuple[float, float]]:
    """Sectors as (center, half_width) in the person's frame (0 = heading)."""
    if resolve_mode(human, params) is Mode.UNIDIRECTIONAL:
        return [(wrap_angle(params.alpha_mean), params.alpha1 / 2)]
    half = params.alpha2 / 2
    left, right = wrap_angle(params.alpha_mean), wrap_angle(-params.alpha_mean)
    return [(left, half)] if left == right else [(left, half), (right, half)]


def sectors_for(human: HumanPose, params: ApproachParams) -> list[tuple[float, float]]:
    """Sectors as (center, half_width) with absolute world-frame centers."""
    return [(wrap_angle(human.heading + c), h) for c, h in relative_sectors(human, params)]


def in_sectors(alpha: float, sectors: list[tuple[float, float]]) -> bool:
    return any(abs(wrap_angle(alpha - c)) <= h + ANGLE_EPS for c, h in sectors)


def ring_radii(grid: _Grid, params: ApproachParams) -> range:
    lo = math.floor(params.r_min / grid.resolution + 0.5)
    hi = math.floor(params.r_max / grid.resolution + 0.5)
    return range(lo, hi + 1)


def _wrap_array(a: np.ndarray) -> np.ndarray:
    w = np.remainder(a + math.pi, TAU) - math.pi
    w[w <= -math.pi] = math.pi
    return w


def define_search_area(grid: _Grid, human: HumanPose, params: ApproachParams) -> list[CandidateCell]:
    """Enumerate the candidate container S for ``human``.

    Rings of integer cell radius are rasterized around the person's cell and
    every ring cell whose bearing lies in a permitted sector is kept.  The
    costmap is not consulted here; occupied cells are pruned later.
    """
    if params.r_min > params.r_max:
        raise InvalidParameter(f"r_min ({params.r_min}) > r_max ({params.r_max})")
    seed = grid.world_to_cell(human.x, human.y)
    sectors = relative_sectors(human, params)
    ox, oy = grid.origin
    res = grid.resolution
    out = []
    for radius in ring_radii(grid, params):
        rdx, rdy = ring_offsets(radius)
        cols, rows = rdx + seed.col, rdy + seed.row
        keep = (cols >= 0) & (rows >= 0) & (cols < grid.width) & (rows < grid.height)
        cols, rows = cols[keep], rows[keep]
        dx = ox + cols * res - human.x
        dy = oy + rows * res - human.y
        alpha = _wrap_array(np.arctan2(dy, dx) - human.heading)
        ok = np.zeros(alpha.shape, bool)
        for center, half in sectors:
            ok |= np.abs(_wrap_array(alpha - center)) <= half + ANGLE_EPS
        dist = np.hypot(dx, dy)
        for c, r, d, a in zip(cols[ok].tolist(), rows[ok].tolist(), dist[ok].tolist(), alpha[ok].tolist()):
            out.append(CandidateCell(CellIndex(c, r), d, a))
    return out
