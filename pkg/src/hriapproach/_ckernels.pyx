# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels: multi-goal wavefront and single-goal A*."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint8_t
from libc.stdlib cimport malloc, realloc, free

cnp.import_array()

cdef int DX[8]
cdef int DY[8]
DX[:] = [1, 0, -1, 0, 1, -1, -1, 1]
DY[:] = [0, 1, 0, -1, 1, 1, -1, -1]


def wavefront(const uint8_t[:, ::1] passable, Py_ssize_t start, goals,
              long depth_cap=-1, int connectivity=4):
    cdef Py_ssize_t h = passable.shape[0], w = passable.shape[1], n = h * w
    cdef cnp.ndarray[int32_t, ndim=2] depth_arr = np.full((h, w), -1, dtype=np.int32)
    cdef int32_t[::1] depth = depth_arr.reshape(-1)
    cdef cnp.ndarray[uint8_t, ndim=1] goal_arr = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] is_goal = goal_arr
    cdef int64_t[::1] g = np.ascontiguousarray(goals, dtype=np.int64).reshape(-1)
    cdef cnp.ndarray[int32_t, ndim=1] queue_arr = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] queue = queue_arr
    cdef Py_ssize_t i, head = 0, tail = 0, remaining = 0
    cdef int k, x, y, nx, ny, d
    cdef int32_t cur, nb
    cdef long cap = depth_cap if depth_cap >= 0 else n

    for i in range(g.shape[0]):
        if g[i] < 0 or g[i] >= n:
            raise IndexError("goal index out of range")
        if not is_goal[g[i]]:
            is_goal[g[i]] = 1
            remaining += 1
    if start < 0 or start >= n:
        raise IndexError("start index out of range")

    depth[start] = 0
    queue[tail] = <int32_t>start
    tail += 1
    if is_goal[start]:
        remaining -= 1
    while head < tail and remaining > 0:
        cur = queue[head]
        head += 1
        d = depth[cur]
        if d >= cap:
            continue
        x = cur % w
        y = cur // w
        for k in range(connectivity):
            nx = x + DX[k]
            ny = y + DY[k]
            if nx < 0 or ny < 0 or nx >= w or ny >= h:
                continue
            nb = ny * w + nx
            if depth[nb] >= 0 or not passable[ny, nx]:
                continue
            depth[nb] = d + 1
            queue[tail] = nb
            tail += 1
            if is_goal[nb]:
                remaining -= 1
                if remaining == 0:
                    break
    return depth_arr


cdef inline void _heap_push(int64_t* heap, Py_ssize_t* size, int64_t key) nogil:
    cdef Py_ssize_t i = size[0], parent
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if heap[parent] <= key:
            break
        heap[i] = heap[parent]
        i = parent
    heap[i] = key


cdef inline int64_t _heap_pop(int64_t* heap, Py_ssize_t* size) nogil:
    cdef int64_t top = heap[0], last
    cdef Py_ssize_t i = 0, child, n
    size[0] -= 1
    n = size[0]
    last = heap[n]
    while True:
        child = 2 * i + 1
        if child >= n:
            break
        if child + 1 < n and heap[child + 1] < heap[child]:
            child += 1
        if heap[child] >= last:
            break
        heap[i] = heap[child]
        i = child
    heap[i] = last
    return top


cdef inline int _heuristic(int x, int y, int gx, int gy, int connectivity) nogil:
    cdef int ax = x - gx if x > gx else gx - x
    cdef int ay = y - gy if y > gy else gy - y
    if connectivity == 4:
        return ax + ay
    return ax if ax > ay else ay


def astar(const uint8_t[:, ::1] passable, Py_ssize_t start, Py_ssize_t goal,
          int connectivity=4):
    """Unit-cost A* length in steps, or -1 when ``goal`` is unreachable."""
    cdef Py_ssize_t h = passable.shape[0], w = passable.shape[1], n = h * w
    if start < 0 or start >= n or goal < 0 or goal >= n:
        raise IndexError("cell index out of range")
    if start == goal:
        return 0
    if not passable[goal // w, goal % w]:
        return -1
    cdef cnp.ndarray[int32_t, ndim=1] g_arr = np.full(n, -1, dtype=np.int32)
    cdef int32_t[::1] gcost = g_arr
    cdef Py_ssize_t cap = 1024, size = 0
    cdef int64_t* heap = <int64_t*>malloc(cap * sizeof(int64_t))
    cdef int64_t* grown
    cdef int64_t key
    cdef int gx = goal % w, gy = goal // w, x, y, nx, ny, k, f, gc
    cdef int32_t cur, nb
    cdef long result = -1
    if heap == NULL:
        raise MemoryError()
    try:
        gcost[start] = 0
        _heap_push(heap, &size, (<int64_t>_heuristic(start % w, start // w, gx, gy, connectivity) << 32) | start)
        while size > 0:
            key = _heap_pop(heap, &size)
            cur = <int32_t>(key & 0xFFFFFFFF)
            f = <int>(key >> 32)
            x = cur % w
            y = cur // w
            gc = gcost[cur]
            if f != gc + _heuristic(x, y, gx, gy, connectivity):
                continue  # stale entry
            if cur == goal:
                result = gc
                break
            for k in range(connectivity):
                nx = x + DX[k]
                ny = y + DY[k]
                if nx < 0 or ny < 0 or nx >= w or ny >= h or not passable[ny, nx]:
                    continue
                nb = ny * w + nx
                if gcost[nb] >= 0 and gcost[nb] <= gc + 1:
                    continue
                gcost[nb] = gc + 1
                if size == cap:
                    cap *= 2
                    grown = <int64_t*>realloc(heap, cap * sizeof(int64_t))
                    if grown == NULL:
                        raise MemoryError()
                    heap = grown
                _heap_push(heap, &size,
                           (<int64_t>(gc + 1 + _heuristic(nx, ny, gx, gy, connectivity)) << 32) | nb)
    finally:
        free(heap)
    return result
