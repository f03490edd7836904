"""Occupancy grids, inflated costmaps and the grid geometry helpers.

Cells are addressed as ``CellIndex(col, row)``; ``col`` grows with world x and
``row`` with world y.  ``origin`` is the world position of the *center* of
cell (0, 0), so cell ``(c, r)`` is centered at ``origin + (c, r) * resolution``.
Arrays are stored row-major with shape ``(height, width)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from hriapproach.errors import InvalidParameter, OutOfBounds, ParseError

FREE = 0
OCCUPIED = 1
UNKNOWN = 2

LETHAL = 255
INSCRIBED = 254

_SYMBOLS = {".": FREE, "#": OCCUPIED, "?": UNKNOWN}
_CHARS = {v: k for k, v in _SYMBOLS.items()}

# Radii are compared in cell units; this absorbs 0.15 / 0.05 = 2.9999999999999996.
_RADIUS_EPS = 1e-9


class CellIndex(NamedTuple):
    col: int
    row: int


@dataclass(frozen=True, eq=False)
class _Grid:
    width: int
    height: int
    resolution: float
    origin: tuple[float, float]

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise InvalidParameter(f"map must be at least 1x1, got {self.width}x{self.height}")
        if not self.resolution > 0:
            raise InvalidParameter(f"resolution must be > 0, got {self.resolution}")
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    def same_geometry(self, other: _Grid) -> bool:
        return (
            self.width == other.width
            and self.height == other.height
            and self.resolution == other.resolution
            and self.origin == other.origin
        )

    def in_bounds(self, cell: CellIndex | tuple[int, int]) -> bool:
        col, row = cell
        return 0 <= col < self.width and 0 <= row < self.height

    def world_to_cell(self, x: float, y: float) -> CellIndex:
        col = math.floor((x - self.origin[0]) / self.resolution + 0.5)
        row = math.floor((y - self.origin[1]) / self.resolution + 0.5)
        if not (0 <= col < self.width and 0 <= row < self.height):
            raise OutOfBounds(f"point ({x}, {y}) is outside the {self.width}x{self.height} map")
        return CellIndex(col, row)

    def cell_to_world(self, cell: CellIndex | tuple[int, int]) -> tuple[float, float]:
        if not self.in_bounds(cell):
            raise OutOfBounds(f"cell {tuple(cell)} is outside the {self.width}x{self.height} map")
        col, row = cell
        return (self.origin[0] + col * self.resolution, self.origin[1] + row * self.resolution)

    def flat_index(self, cell: CellIndex | tuple[int, int]) -> int:
        return cell[1] * self.width + cell[0]


@dataclass(frozen=True, eq=False)
class GridMap(_Grid):
    """Static occupancy grid; ``cells`` holds FREE / OCCUPIED / UNKNOWN codes."""

    cells: np.ndarray = None

    def __post_init__(self):
        super().__post_init__()
        cells = np.array(self.cells, dtype=np.uint8, copy=True)
        if cells.shape != (self.height, self.width):
            raise InvalidParameter(f"cells shape {cells.shape} != ({self.height}, {self.width})")
        if cells.size and cells.max() > UNKNOWN:
            raise InvalidParameter("cells must be FREE, OCCUPIED or UNKNOWN")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def empty(cls, width: int, height: int, resolution: float = 0.05,
              origin: tuple[float, float] = (0.0, 0.0)) -> GridMap:
        return cls(width, height, resolution, origin, np.zeros((height, width), np.uint8))

    @classmethod
    def from_rows(cls, rows: list[str], resolution: float = 0.05,
                  origin: tuple[float, float] = (0.0, 0.0)) -> GridMap:
        """Build a map from ASCII rows (row 0 first) using ``.``, ``#`` and ``?``."""
        if not rows:
            raise ParseError("no map rows")
        width = len(rows[0])
        cells = np.empty((len(rows), width), np.uint8)
        for r, line in enumerate(rows):
            if len(line) != width:
                raise ParseError(f"row {r} has {len(line)} cells, expected {width}", line=r + 1)
            for c, ch in enumerate(line):
                try:
                    cells[r, c] = _SYMBOLS[ch]
                except KeyError:
                    raise ParseError(f"unknown occupancy symbol {ch!r}", line=r + 1, offset=c) from None
        return cls(width, len(rows), resolution, origin, cells)

    def to_rows(self) -> list[str]:
        return ["".join(_CHARS[int(v)] for v in row) for row in self.cells]

    def with_cells(self, cells: np.ndarray) -> GridMap:
        return GridMap(self.width, self.height, self.resolution, self.origin, cells)

    def __eq__(self, other):
        if not isinstance(other, GridMap):
            return NotImplemented
        return self.same_geometry(other) and np.array_equal(self.cells, other.cells)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Costmap(_Grid):
    """Inflated cost field, integer costs in [0, 255] with 255 lethal."""

    cost: np.ndarray = None
    lethal_threshold: int = LETHAL

    def __post_init__(self):
        super().__post_init__()
        cost = np.array(self.cost, dtype=np.uint8, copy=True)
        if cost.shape != (self.height, self.width):
            raise InvalidParameter(f"cost shape {cost.shape} != ({self.height}, {self.width})")
        cost.setflags(write=False)
        object.__setattr__(self, "cost", cost)

    def value(self, cell: CellIndex | tuple[int, int]) -> int:
        if not self.in_bounds(cell):
            raise OutOfBounds(f"cell {tuple(cell)} is outside the map")
        return int(self.cost[cell[1], cell[0]])

    def is_lethal(self, cell: CellIndex | tuple[int, int]) -> bool:
        return self.value(cell) >= self.lethal_threshold

    def passable(self) -> np.ndarray:
        """uint8 mask, 1 where the robot may stand."""
        return (self.cost < self.lethal_threshold).astype(np.uint8)

    def __eq__(self, other):
        if not isinstance(other, Costmap):
            return NotImplemented
        return (
            self.same_geometry(other)
            and self.lethal_threshold == other.lethal_threshold
            and np.array_equal(self.cost, other.cost)
        )

    __hash__ = None


def world_to_cell(grid: _Grid, p: tuple[float, float]) -> CellIndex:
    return grid.world_to_cell(p[0], p[1])


def cell_to_world(grid: _Grid, c: CellIndex | tuple[int, int]) -> tuple[float, float]:
    return grid.cell_to_world(c)


def inflate(gmap: GridMap, robot_radius: float = 0.25, inflation_radius: float = 0.6) -> Costmap:
    """Inflate the occupied cells of ``gmap`` into a costmap.

    Distances are exact Euclidean distances between cell centers.  Cells
    within ``robot_radius`` of an obstacle are lethal (255); between
    ``robot_radius`` and ``inflation_radius`` the cost falls linearly from 254
    to 1; beyond that it is 0.  Unknown cells are lethal.
    """
    if robot_radius < 0 or inflation_radius < 0:
        raise InvalidParameter("inflation radii must be non-negative")
    if inflation_radius < robot_radius:
        raise InvalidParameter("inflation_radius must be >= robot_radius")

    obstacles = gmap.cells == OCCUPIED
    cost = np.zeros(gmap.shape, np.uint8)
    if obstacles.any():
        dist = ndimage.distance_transform_edt(~obstacles)
        cost[:] = inflation_cost(dist, robot_radius / gmap.resolution,
                                 inflation_radius / gmap.resolution)
    cost[gmap.cells == UNKNOWN] = LETHAL
    return Costmap(gmap.width, gmap.height, gmap.resolution, gmap.origin, cost)


def inflation_cost(dist_cells, robot_cells: float, inflation_cells: float) -> np.ndarray:
    """Map distances (in cells) to the nearest obstacle onto costs."""
    d = np.asarray(dist_cells, dtype=float)
    out = np.zeros(d.shape, np.uint8)
    lethal = d <= robot_cells + _RADIUS_EPS
    band = ~lethal & (d <= inflation_cells + _RADIUS_EPS)
    span = inflation_cells - robot_cells
    if span > 0:
        frac = np.clip((inflation_cells - d[band]) / span, 0.0, 1.0)
        out[band] = np.floor(1.0 + 253.0 * frac + 0.5).astype(np.uint8)
    out[lethal] = LETHAL
    return out


@lru_cache(maxsize=512)
def ring_offsets(radius: int) -> tuple[np.ndarray, np.ndarray]:
    """Unique (dx, dy) offsets of the midpoint circle, sorted by angle in [0, 2*pi)."""
    if radius == 0:
        return np.zeros(1, np.int64), np.zeros(1, np.int64)
    octant = []
    x, y, d = radius, 0, 1 - radius
    while y <= x:
        octant.append((x, y))
        y += 1
        if d <= 0:
            d += 2 * y + 1
        else:
            x -= 1
            d += 2 * (y - x) + 1
    a = np.array(octant, dtype=np.int64)
    px, py = a[:, 0], a[:, 1]
    dx = np.concatenate([px, py, -py, -px, -px, -py, py, px])
    dy = np.concatenate([py, px, px, py, -py, -px, -px, -py])
    key = np.unique((dx + radius) * (2 * radius + 1) + (dy + radius))
    dx, dy = key // (2 * radius + 1) - radius, key % (2 * radius + 1) - radius
    order = np.argsort(np.arctan2(dy, dx) % (2 * np.pi), kind="stable")
    dx, dy = dx[order], dy[order]
    dx.setflags(write=False)
    dy.setflags(write=False)
    return dx, dy


def raster_circle(grid: _Grid, center: CellIndex | tuple[int, int], radius: int) -> list[CellIndex]:
    """Midpoint-circle rasterization of one ring, clipped to the map.

    Cells are unique and sorted by angle from the +x axis in [0, 2*pi).
    """
    if radius < 0:
        raise InvalidParameter(f"radius must be >= 0, got {radius}")
    dx, dy = ring_offsets(int(radius))
    cols, rows = dx + center[0], dy + center[1]
    keep = (cols >= 0) & (rows >= 0) & (cols < grid.width) & (rows < grid.height)
    return [CellIndex(c, r) for c, r in zip(cols[keep].tolist(), rows[keep].tolist())]


# --- file I/O ---------------------------------------------------------------

def dumps_map(gmap: GridMap) -> str:
    header = f"gridmap {gmap.width} {gmap.height} {gmap.resolution!r} {gmap.origin[0]!r} {gmap.origin[1]!r}"
    return "\n".join([header, *gmap.to_rows()]) + "\n"


def loads_map(text: str) -> GridMap:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty map file", line=1)
    parts = lines[0].split()
    if len(parts) != 6 or parts[0] != "gridmap":
        raise ParseError("header must be 'gridmap <width> <height> <resolution_m> <origin_x_m> <origin_y_m>'",
                         line=1, offset=0)
    try:
        width, height = int(parts[1]), int(parts[2])
        resolution, ox, oy = float(parts[3]), float(parts[4]), float(parts[5])
    except ValueError as exc:
        raise ParseError(f"bad header value: {exc}", line=1) from None
    if width < 1 or height < 1 or not resolution > 0:
        raise ParseError("header requires width, height >= 1 and resolution > 0", line=1)
    rows = lines[1:]
    if len(rows) != height:
        raise ParseError(f"expected {height} rows, found {len(rows)}", line=len(lines) + 1)
    for r, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"expected {width} cells, found {len(row)}", line=r + 2, offset=min(len(row), width))
    try:
        return GridMap.from_rows(rows, resolution, (ox, oy))
    except ParseError as exc:
        # from_rows counts rows from 1; shift past the header line
        raise ParseError(str(exc).split(" (line")[0], line=(exc.line or 0) + 1, offset=exc.offset) from None


def load_map(path) -> GridMap:
    return loads_map(Path(path).read_text())


def save_map(gmap: GridMap, path) -> None:
    Path(path).write_text(dumps_map(gmap))


def _pnm_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    tokens, i = [], 0
    while len(tokens) < count:
        while i < len(data) and data[i:i + 1].isspace():
            i += 1
        if i < len(data) and data[i:i + 1] == b"#":
            while i < len(data) and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < len(data) and not data[i:i + 1].isspace():
            i += 1
        if start == i:
            raise ParseError("truncated PNM header", line=1, offset=i)
        tokens.append(data[start:i])
    return tokens, i + 1  # exactly one whitespace byte before the raster


def load_pgm_map(path, resolution: float, origin: tuple[float, float] = (0.0, 0.0)) -> GridMap:
    """Import a binary PGM (P5) occupancy image.

    Pixels >= 250 are free, <= 50 occupied, anything else unknown (values are
    rescaled to 0..255 first when maxval differs).  The image's top row is the
    map's highest row, i.e. the image is viewed north-up.
    """
    data = Path(path).read_bytes()
    tokens, start = _pnm_tokens(data, 4)
    if tokens[0] != b"P5":
        raise ParseError(f"not a binary PGM (magic {tokens[0]!r})", line=1, offset=0)
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise ParseError("bad PGM header", line=1) from None
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise ParseError("bad PGM dimensions or maxval", line=1)
    dtype = np.dtype(">u2" if maxval > 255 else np.uint8)
    expected = width * height * dtype.itemsize
    raster = data[start:start + expected]
    if len(raster) != expected:
        raise ParseError(f"PGM raster has {len(raster)} bytes, expected {expected}", offset=start)
    pix = np.frombuffer(raster, dtype=dtype).reshape(height, width).astype(float)
    if maxval != 255:
        pix = pix * (255.0 / maxval)
    cells = np.full(pix.shape, UNKNOWN, np.uint8)
    cells[pix >= 250] = FREE
    cells[pix <= 50] = OCCUPIED
    return GridMap(width, height, resolution, origin, cells[::-1])
