"""Pure numpy implementations of the hot kernels.

These are the reference versions; ``_ckernels.pyx`` mirrors them one to one.
"""
import math

import numpy as np


def min_seg_dist(px, py, segs):
    """Distance from each point (px[i], py[i]) to the nearest segment.

    ``segs`` is an (n, 4) array of rows (ax, ay, bx, by).
    """
    px = np.asarray(px, dtype=float)[:, None]
    py = np.asarray(py, dtype=float)[:, None]
    segs = np.asarray(segs, dtype=float)
    ax, ay, bx, by = segs[:, 0], segs[:, 1], segs[:, 2], segs[:, 3]
    dx, dy = bx - ax, by - ay
    den = dx * dx + dy * dy
    den = np.where(den == 0.0, 1.0, den)
    t = ((px - ax) * dx + (py - ay) * dy) / den
    np.clip(t, 0.0, 1.0, out=t)
    cx = ax + t * dx - px
    cy = ay + t * dy - py
    return np.sqrt((cx * cx + cy * cy).min(axis=1))


def inside_polygon(px, py, ring):
    """Even-odd membership of each point in the closed ring (k, 2)."""
    px = np.asarray(px, dtype=float)
    py = np.asarray(py, dtype=float)
    ring = np.asarray(ring, dtype=float)
    ax, ay = ring[:, 0], ring[:, 1]
    bx, by = np.roll(ax, -1), np.roll(ay, -1)
    inside = np.zeros(px.shape, dtype=bool)
    for i in range(len(ax)):
        a_y, b_y = ay[i], by[i]
        if a_y == b_y:
            continue
        crosses = (a_y > py) != (b_y > py)
        xi = ax[i] + (py - a_y) * (bx[i] - ax[i]) / (b_y - a_y)
        inside ^= crosses & (px < xi)
    return inside


def _feasible_clearance(x, y, qx, qy, segs, ring):
    """Clearance at each candidate, or -1 where the candidate is infeasible."""
    r = min_seg_dist(x, y, segs)
    ok = inside_polygon(x, y, ring) & (np.hypot(x - qx, y - qy) <= r)
    return np.where(ok, r, -1.0)


def refine_constrained(x, y, qx, qy, segs, ring, h0, hmin, ndirs):
    """Compass search maximizing clearance subject to containing q.

    Starting from a feasible (x, y), move to the best improving feasible
    neighbour among ``ndirs`` directions at step h; halve h on failure.
    The direction fan is rotated by the golden angle after every step so that
    ridges of the clearance function are not missed systematically.
    Returns (x, y, r).
    """
    segs = np.asarray(segs, dtype=float)
    ring = np.asarray(ring, dtype=float)
    base = np.arange(ndirs) * (2.0 * math.pi / ndirs)
    r = float(_feasible_clearance(np.array([x]), np.array([y]), qx, qy, segs, ring)[0])
    h = h0
    phase = 0.0
    golden = math.pi * (3.0 - math.sqrt(5.0))
    while h >= hmin:
        ang = base + phase
        cx = x + h * np.cos(ang)
        cy = y + h * np.sin(ang)
        vals = _feasible_clearance(cx, cy, qx, qy, segs, ring)
        k = int(np.argmax(vals))
        if vals[k] > r:
            x, y, r = float(cx[k]), float(cy[k]), float(vals[k])
            h *= 1.5
        else:
            h *= 0.5
        phase += golden
    return x, y, r
