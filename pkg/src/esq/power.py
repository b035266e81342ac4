"""Power (Laguerre) diagrams of circles with slab point location.

The owner of a point q is the circle minimising the power distance
``|q - c|^2 - r^2``; q lies in the union of the circles iff the owner's power
distance is non-positive.  Cells are obtained from the lower convex hull of
the lifted points ``(a, b, a^2 + b^2 - r^2)``; the resulting straight edges are
indexed by a slab decomposition for O(log n) location.
"""
from __future__ import annotations

import bisect
import math

import numpy as np
from scipy.spatial import ConvexHull, QhullError

# Circles at or below this count are located by direct evaluation.
SCAN_LIMIT = 4


def power_distances(centers: np.ndarray, radii: np.ndarray, x: float, y: float) -> np.ndarray:
    dx = centers[:, 0] - x
    dy = centers[:, 1] - y
    return dx * dx + dy * dy - radii * radii


class SlabLocator:
    """Point location among non-crossing segments labelled by the face above.

    ``segments`` holds tuples ``(x0, y0, x1, y1, above)``.  Vertical segments
    carry no slab interior and are ignored.  ``bottom_label(x)`` names the
    face below every segment of the slab containing x.
    """

    def __init__(self, segments, bottom_label, xlo: float, xhi: float):
        segs = []
        breaks = {xlo, xhi}
        for x0, y0, x1, y1, lab in segments:
            if x1 < x0:
                x0, y0, x1, y1 = x1, y1, x0, y0
            breaks.add(x0)
            breaks.add(x1)
            if x1 - x0 <= 1e-12 * max(1.0, abs(x0)):
                continue
            m = (y1 - y0) / (x1 - x0)
            segs.append((x0, x1, m, y0 - m * x0, lab))
        xs = sorted(breaks)
        xs = [x for x in xs if xlo <= x <= xhi]
        self.xs = xs
        self.slopes = []
        self.icepts = []
        self.labels = []
        self.bottom = []
        starts = sorted(range(len(segs)), key=lambda k: segs[k][0])
        active = set()
        si = 0
        for k in range(len(xs) - 1):
            a, b = xs[k], xs[k + 1]
            mid = 0.5 * (a + b)
            while si < len(starts) and segs[starts[si]][0] <= a:
                active.add(starts[si])
                si += 1
            active = {s for s in active if segs[s][1] >= b}
            order = sorted(active, key=lambda s: segs[s][2] * mid + segs[s][3])
            self.slopes.append([segs[s][2] for s in order])
            self.icepts.append([segs[s][3] for s in order])
            self.labels.append([segs[s][4] for s in order])
            self.bottom.append(bottom_label(mid))

    def locate(self, x: float, y: float):
        """Label of the face containing (x, y), or None outside the slabs."""
        k = bisect.bisect_right(self.xs, x) - 1
        if k < 0 or k >= len(self.slopes):
            if k == len(self.slopes) and x == self.xs[-1] and k > 0:
                k -= 1
            else:
                return None
        ms, bs = self.slopes[k], self.icepts[k]
        lo, hi = 0, len(ms)
        while lo < hi:
            mid = (lo + hi) // 2
            if ms[mid] * x + bs[mid] <= y:
                lo = mid + 1
            else:
                hi = mid
        return self.labels[k][lo - 1] if lo > 0 else self.bottom[k]


def _hull_edges(centers, radii):
    """Power-diagram edges from the lower hull of the lifted circles.

    Returns (p, d, i, j, bounded) tuples: a segment from p to p + d when
    bounded, a ray from p in direction d otherwise.
    """
    w = (centers ** 2).sum(axis=1) - radii ** 2
    lifted = np.column_stack([centers, w])
    hull = ConvexHull(lifted)
    eq = hull.equations
    lower = eq[:, 2] < -1e-12
    simp = hull.simplices
    pv = {}
    for f in np.nonzero(lower)[0]:
        i, j, k = simp[f]
        A = 2.0 * np.array([centers[j] - centers[i], centers[k] - centers[i]])
        rhs = np.array([w[j] - w[i], w[k] - w[i]])
        try:
            pv[f] = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError:
            pv[f] = None
    out = []
    for f, p in pv.items():
        if p is None:
            continue
        verts = simp[f]
        for m in range(3):
            g = hull.neighbors[f][m]
            i, j = [verts[t] for t in range(3) if t != m]
            if lower[g]:
                if g < f or pv.get(g) is None:
                    continue
                out.append((p, pv[g] - p, i, j, True))
            else:
                k = verts[m]
                dvec = centers[j] - centers[i]
                d = np.array([-dvec[1], dvec[0]])
                if np.dot(d, centers[k] - centers[i]) > 0:
                    d = -d
                out.append((p, d, i, j, False))
    return out


def _clip(p, d, bounded, box):
    """Clip segment/ray to the axis box; returns (x0, y0, x1, y1) or None."""
    t0, t1 = 0.0, 1.0 if bounded else math.inf
    for axis in (0, 1):
        lo, hi = box[2 * axis], box[2 * axis + 1]
        if abs(d[axis]) < 1e-300:
            if not (lo <= p[axis] <= hi):
                return None
            continue
        a = (lo - p[axis]) / d[axis]
        b = (hi - p[axis]) / d[axis]
        if a > b:
            a, b = b, a
        t0, t1 = max(t0, a), min(t1, b)
    if t0 >= t1:
        return None
    return (p[0] + t0 * d[0], p[1] + t0 * d[1], p[0] + t1 * d[0], p[1] + t1 * d[1])


def _brute_cells(centers, radii, box):
    """Cell polygons by half-plane clipping; used for tiny or flat inputs."""
    w = (centers ** 2).sum(axis=1) - radii ** 2
    n = len(radii)
    x0, x1, y0, y1 = box
    cells = []
    for i in range(n):
        poly = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        for k in range(n):
            if k == i or not poly:
                continue
            # keep pow_i <= pow_k  <=>  2 x.(c_k - c_i) <= w_k - w_i
            ax, ay = 2.0 * (centers[k] - centers[i])
            c = w[k] - w[i]
            if ax == 0.0 and ay == 0.0:
                if c < 0:
                    poly = []
                continue
            res = []
            for t in range(len(poly)):
                P, Q = poly[t], poly[(t + 1) % len(poly)]
                fp = ax * P[0] + ay * P[1] - c
                fq = ax * Q[0] + ay * Q[1] - c
                if fp <= 0:
                    res.append(P)
                if (fp < 0 < fq) or (fq < 0 < fp):
                    s = fp / (fp - fq)
                    res.append((P[0] + s * (Q[0] - P[0]), P[1] + s * (Q[1] - P[1])))
            poly = res
        cells.append(poly)
    return cells


class PowerMembership:
    """Answers "is q inside the union of these circles" by power-cell location."""

    def __init__(self, centers, radii):
        self.centers = np.asarray(centers, dtype=float).reshape(-1, 2)
        self.radii = np.asarray(radii, dtype=float)
        self.locator = None
        n = len(self.radii)
        if n <= SCAN_LIMIT:
            return
        span = np.ptp(self.centers, axis=0).max() + 2.0 * self.radii.max() + 1.0
        lo = self.centers.min(axis=0) - 4.0 * span
        hi = self.centers.max(axis=0) + 4.0 * span
        self.box = (lo[0], hi[0], lo[1], hi[1])
        try:
            segments = self._segments_from_hull()
        except (QhullError, ValueError):
            segments = self._segments_from_cells()
        self.locator = SlabLocator(segments, self._bottom_owner, self.box[0], self.box[1])

    def _segments_from_hull(self):
        segs = []
        for p, d, i, j, bounded in _hull_edges(self.centers, self.radii):
            c = _clip(p, d, bounded, self.box)
            if c is None:
                continue
            above = i if self.centers[i][1] > self.centers[j][1] else j
            segs.append((*c, int(above)))
        return segs

    def _segments_from_cells(self):
        segs = []
        tol = 1e-9 * (self.box[1] - self.box[0])
        for i, poly in enumerate(_brute_cells(self.centers, self.radii, self.box)):
            for t in range(len(poly)):
                P, Q = poly[t], poly[(t + 1) % len(poly)]
                if abs(Q[0] - P[0]) <= tol:
                    xm = 0.5 * (P[0] + Q[0])
                    segs.append((xm, P[1], xm, Q[1], i))
                # counterclockwise ring: interior is above edges running in +x
                elif Q[0] > P[0] and P[1] > self.box[2] and Q[1] > self.box[2]:
                    segs.append((P[0], P[1], Q[0], Q[1], i))
        return segs

    def _bottom_owner(self, x):
        return int(np.argmin(power_distances(self.centers, self.radii, x, self.box[2])))

    def owner(self, x: float, y: float) -> int:
        if self.locator is not None:
            box = self.box
            if box[0] < x < box[1] and box[2] < y < box[3]:
                k = self.locator.locate(x, y)
                if k is not None:
                    return k
        return int(np.argmin(power_distances(self.centers, self.radii, x, y)))

    def owner_power(self, x: float, y: float):
        k = self.owner(x, y)
        dx = self.centers[k, 0] - x
        dy = self.centers[k, 1] - y
        return k, dx * dx + dy * dy - self.radii[k] ** 2
