"""PPM (P6) rendering of a scenario: map, search areas, person and robot poses.

One pixel per cell, north-up (the top image row is the highest map row).
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from hriapproach.gridmap import OCCUPIED, UNKNOWN
from hriapproach.scenario import Scenario
from hriapproach.search_area import define_search_area

WHITE = (255, 255, 255)
BLACK = (0, 0, 0)
GRAY = (128, 128, 128)
SHADE = (200, 220, 255)
HUMAN = (220, 30, 30)
ROBOT = (30, 60, 220)

HUMAN_ARROW = 12
ROBOT_ARROW = 6


def _line(img: np.ndarray, c0: int, r0: int, c1: int, r1: int, color) -> None:
    """Bresenham segment in (col, row) map coordinates, clipped."""
    h, w = img.shape[:2]
    dc, dr = abs(c1 - c0), -abs(r1 - r0)
    sc, sr = (1 if c0 < c1 else -1), (1 if r0 < r1 else -1)
    err = dc + dr
    while True:
        if 0 <= c0 < w and 0 <= r0 < h:
            img[r0, c0] = color
        if c0 == c1 and r0 == r1:
            break
        e2 = 2 * err
        if e2 >= dr:
            err += dr
            c0 += sc
        if e2 <= dc:
            err += dc
            r0 += sr


def draw_arrow(img: np.ndarray, col: int, row: int, theta: float, length: int, color) -> None:
    tip_c = col + round(length * math.cos(theta))
    tip_r = row + round(length * math.sin(theta))
    _line(img, col, row, tip_c, tip_r, color)
    head = max(2, length // 3)
    for side in (-1, 1):
        a = theta + math.pi + side * math.radians(35)
        _line(img, tip_c, tip_r, tip_c + round(head * math.cos(a)), tip_r + round(head * math.sin(a)), color)
    if 0 <= row < img.shape[0] and 0 <= col < img.shape[1]:
        img[row, col] = color


def render(sc: Scenario, robot_poses: list[tuple[float, float, float]] | None = None) -> np.ndarray:
    """RGB image (row 0 = lowest map row) of the scenario."""
    gmap = sc.gridmap
    img = np.empty((gmap.height, gmap.width, 3), np.uint8)
    img[:] = WHITE
    img[gmap.cells == OCCUPIED] = BLACK
    img[gmap.cells == UNKNOWN] = GRAY
    humans = sc.humans
    for i, h in enumerate(humans):
        for cand in define_search_area(gmap, h, sc.params_for(i)):
            if gmap.cells[cand.cell.row, cand.cell.col] == 0:
                img[cand.cell.row, cand.cell.col] = SHADE
    for x, y, theta in robot_poses or []:
        c = gmap.world_to_cell(x, y)
        draw_arrow(img, c.col, c.row, theta, ROBOT_ARROW, ROBOT)
    for h in humans:
        c = gmap.world_to_cell(h.x, h.y)
        draw_arrow(img, c.col, c.row, h.heading, HUMAN_ARROW, HUMAN)
    return img


def write_ppm(path, img: np.ndarray) -> None:
    h, w = img.shape[:2]
    Path(path).write_bytes(f"P6\n{w} {h}\n255\n".encode() + np.ascontiguousarray(img[::-1]).tobytes())


def read_ppm(path) -> np.ndarray:
    """Inverse of :func:`write_ppm` (row 0 = lowest map row)."""
    data = Path(path).read_bytes()
    magic, dims, maxval, rest = data.split(b"\n", 3)
    if magic != b"P6" or maxval != b"255":
        raise ValueError("unsupported PPM")
    w, h = (int(v) for v in dims.split())
    return np.frombuffer(rest, np.uint8).reshape(h, w, 3)[::-1]
