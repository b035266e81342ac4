# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``; same signatures."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cos, sin, hypot, M_PI

cnp.import_array()


cdef inline double _min_dist(double px, double py, double[:, ::1] s) noexcept nogil:
    cdef Py_ssize_t i, n = s.shape[0]
    cdef double best = 1e300, dx, dy, den, t, cx, cy, d2
    for i in range(n):
        dx = s[i, 2] - s[i, 0]
        dy = s[i, 3] - s[i, 1]
        den = dx * dx + dy * dy
        if den == 0.0:
            t = 0.0
        else:
            t = ((px - s[i, 0]) * dx + (py - s[i, 1]) * dy) / den
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
        cx = s[i, 0] + t * dx - px
        cy = s[i, 1] + t * dy - py
        d2 = cx * cx + cy * cy
        if d2 < best:
            best = d2
    return sqrt(best)


cdef inline bint _inside(double px, double py, double[:, ::1] ring) noexcept nogil:
    cdef Py_ssize_t i, j, n = ring.shape[0]
    cdef bint inside = False
    cdef double ay, by, xi
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        ay = ring[i, 1]
        by = ring[j, 1]
        if ay == by:
            continue
        if (ay > py) != (by > py):
            xi = ring[i, 0] + (py - ay) * (ring[j, 0] - ring[i, 0]) / (by - ay)
            if px < xi:
                inside = not inside
    return inside


cdef inline double _feasible(double x, double y, double qx, double qy,
                             double[:, ::1] s, double[:, ::1] ring) noexcept nogil:
    cdef double r = _min_dist(x, y, s)
    if not _inside(x, y, ring):
        return -1.0
    if hypot(x - qx, y - qy) > r:
        return -1.0
    return r


def min_seg_dist(px, py, segs):
    cdef double[::1] xs = np.ascontiguousarray(px, dtype=np.float64)
    cdef double[::1] ys = np.ascontiguousarray(py, dtype=np.float64)
    cdef double[:, ::1] s = np.ascontiguousarray(segs, dtype=np.float64)
    cdef Py_ssize_t i, m = xs.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(m):
            o[i] = _min_dist(xs[i], ys[i], s)
    return out


def inside_polygon(px, py, ring):
    cdef double[::1] xs = np.ascontiguousarray(px, dtype=np.float64)
    cdef double[::1] ys = np.ascontiguousarray(py, dtype=np.float64)
    cdef double[:, ::1] rg = np.ascontiguousarray(ring, dtype=np.float64)
    cdef Py_ssize_t i, m = xs.shape[0]
    out = np.empty(m, dtype=bool)
    cdef cnp.npy_bool[::1] o = out
    with nogil:
        for i in range(m):
            o[i] = _inside(xs[i], ys[i], rg)
    return out


def refine_constrained(double x, double y, double qx, double qy, segs, ring,
                       double h0, double hmin, int ndirs):
    cdef double[:, ::1] s = np.ascontiguousarray(segs, dtype=np.float64)
    cdef double[:, ::1] rg = np.ascontiguousarray(ring, dtype=np.float64)
    cdef double r = _feasible(x, y, qx, qy, s, rg)
    cdef double h = h0, phase = 0.0
    cdef double golden = M_PI * (3.0 - sqrt(5.0))
    cdef double step = 2.0 * M_PI / ndirs
    cdef double bx, by, bv, cx, cy, v, ang
    cdef int k
    with nogil:
        while h >= hmin:
            bv = -2.0
            bx = x
            by = y
            for k in range(ndirs):
                ang = k * step + phase
                cx = x + h * cos(ang)
                cy = y + h * sin(ang)
                v = _feasible(cx, cy, qx, qy, s, rg)
                if v > bv:
                    bv = v
                    bx = cx
                    by = cy
            if bv > r:
                x = bx
                y = by
                r = bv
                h *= 1.5
            else:
                h *= 0.5
            phase += golden
    return x, y, r
