"""Pure-Python/numpy versions of the grid kernels in ``_ckernels.pyx``.

The wavefront is vectorized one BFS level at a time, which is Lee's
formulation anyway; A* uses :mod:`heapq`.
"""

from __future__ import annotations

import heapq

import numpy as np

_DX = (1, 0, -1, 0, 1, -1, -1, 1)
_DY = (0, 1, 0, -1, 1, 1, -1, -1)


def wavefront(passable, start, goals, depth_cap=-1, connectivity=4):
    passable = np.asarray(passable, dtype=np.uint8)
    h, w = passable.shape
    n = h * w
    goals = np.asarray(goals, dtype=np.int64).reshape(-1)
    if goals.size and (goals.min() < 0 or goals.max() >= n):
        raise IndexError("goal index out of range")
    if not 0 <= start < n:
        raise IndexError("start index out of range")
    cap = depth_cap if depth_cap >= 0 else n

    depth = np.full(n, -1, dtype=np.int32)
    is_goal = np.zeros(n, dtype=bool)
    is_goal[goals] = True
    remaining = int(is_goal.sum())
    open_ = passable.reshape(-1).astype(bool)

    depth[start] = 0
    remaining -= int(is_goal[start])
    frontier = np.array([start], dtype=np.int64)
    d = 0
    while frontier.size and remaining > 0 and d < cap:
        fx = frontier % w
        fy = frontier // w
        parts = []
        for k in range(connectivity):
            nx = fx + _DX[k]
            ny = fy + _DY[k]
            ok = (nx >= 0) & (ny >= 0) & (nx < w) & (ny < h)
            parts.append(ny[ok] * w + nx[ok])
        nb = np.unique(np.concatenate(parts))
        nb = nb[(depth[nb] < 0) & open_[nb]]
        d += 1
        depth[nb] = d
        remaining -= int(is_goal[nb].sum())
        frontier = nb
    return depth.reshape(h, w)


def astar(passable, start, goal, connectivity=4):
    """Unit-cost A* length in steps, or -1 when ``goal`` is unreachable."""
    passable = np.asarray(passable, dtype=np.uint8)
    h, w = passable.shape
    n = h * w
    if not (0 <= start < n and 0 <= goal < n):
        raise IndexError("cell index out of range")
    if start == goal:
        return 0
    if not passable.flat[goal]:
        return -1
    gx, gy = goal % w, goal // w
    if connectivity == 4:
        def heur(x, y):
            return abs(x - gx) + abs(y - gy)
    else:
        def heur(x, y):
            return max(abs(x - gx), abs(y - gy))
    open_ = passable.reshape(-1).tolist()
    gcost = {start: 0}
    heap = [(heur(start % w, start // w), start)]
    while heap:
        f, cur = heapq.heappop(heap)
        x, y = cur % w, cur // w
        g = gcost[cur]
        if f != g + heur(x, y):
            continue
        if cur == goal:
            return g
        for k in range(connectivity):
            nx, ny = x + _DX[k], y + _DY[k]
            if nx < 0 or ny < 0 or nx >= w or ny >= h:
                continue
            nb = ny * w + nx
            if not open_[nb]:
                continue
            old = gcost.get(nb)
            if old is not None and old <= g + 1:
                continue
            gcost[nb] = g + 1
            heapq.heappush(heap, (g + 1 + heur(nx, ny), nb))
    return -1
