"""Brute-force reference answers for every query type.

None of these touch the index code; they share only the primitives in
``geometry`` (and, for the grid maximizer, the vectorized distance kernels).
They are slow on purpose and meant for n in the tens.
"""
from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from . import kernels
from .errors import DegenerateInput, OutsidePolygon, OutsideRegion
from .geometry import (
    EPS_GEOM,
    AxisRect,
    Circle,
    Location,
    Point,
    Polygon,
    QueryAnswer,
    convex_hull,
    point_in_polygon,
)


def _bounded(x, y, r, witness=None) -> QueryAnswer:
    return QueryAnswer.bounded(Circle(Point(float(x), float(y)), float(r)), witness=witness)


# --- circles ---------------------------------------------------------------------


def oracle_lcq(circles, q, ids=None, eps: float = None) -> QueryAnswer:
    """Largest circle containing q; equal radii go to the smaller id."""
    eps = EPS_GEOM if eps is None else eps
    ids = list(range(len(circles))) if ids is None else list(ids)
    best = None
    for cid, c in zip(ids, circles):
        if math.hypot(q[0] - c.center[0], q[1] - c.center[1]) <= c.radius + eps:
            key = (-c.radius, cid)
            if best is None or key < best[0]:
                best = (key, cid, c)
    if best is None:
        return QueryAnswer.null()
    return QueryAnswer.bounded(best[2], witness=best[1])


# --- point sets ------------------------------------------------------------------


def _circumcenters(A, B, C):
    bx, by = B[:, 0] - A[:, 0], B[:, 1] - A[:, 1]
    cx, cy = C[:, 0] - A[:, 0], C[:, 1] - A[:, 1]
    d = 2.0 * (bx * cy - by * cx)
    ok = np.abs(d) > EPS_GEOM
    d = np.where(ok, d, 1.0)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return A[:, 0] + ux, A[:, 1] + uy, np.hypot(ux, uy), ok


def oracle_qmec_points(points, q, eps: float = None) -> QueryAnswer:
    """Largest empty circle containing q among circles pinned by three points.

    Candidates are circumcircles of site triples containing q and
    circumcircles of two sites and q itself; a candidate is empty when no site
    lies strictly inside (by more than eps).
    """
    eps = EPS_GEOM if eps is None else eps
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(P) < 3:
        raise DegenerateInput("need at least 3 points")
    hull = convex_hull(P.tolist())
    if point_in_polygon(hull, q) is not Location.INSIDE:
        return QueryAnswer.unbounded()
    qa = np.array(q, dtype=float)
    best = (-1.0, 0.0, 0.0)
    tri = np.array(list(combinations(range(len(P)), 3)), dtype=int)
    pair = np.array(list(combinations(range(len(P)), 2)), dtype=int)
    groups = [
        (P[tri[:, 0]], P[tri[:, 1]], P[tri[:, 2]], True),
        (P[pair[:, 0]], P[pair[:, 1]], np.broadcast_to(qa, (len(pair), 2)), False),
    ]
    for A, B, C, need_q in groups:
        x, y, r, ok = _circumcenters(A, B, C)
        if need_q:
            ok &= np.hypot(x - qa[0], y - qa[1]) <= r + eps
        if not ok.any():
            continue
        x, y, r = x[ok], y[ok], r[ok]
        d = np.hypot(x[:, None] - P[None, :, 0], y[:, None] - P[None, :, 1])
        empty = (d >= r[:, None] - eps).all(axis=1)
        if empty.any():
            k = int(np.argmax(np.where(empty, r, -1.0)))
            if r[k] > best[0]:
                best = (float(r[k]), float(x[k]), float(y[k]))
    if best[0] < 0:
        return QueryAnswer.null()
    return _bounded(best[1], best[2], best[0])


# --- convex polygons ---------------------------------------------------------------


def _edge_lines(V):
    """Inward unit normals N and offsets C so that N.x + C is the signed distance."""
    A = V
    B = np.roll(V, -1, axis=0)
    d = B - A
    L = np.hypot(d[:, 0], d[:, 1])
    N = np.column_stack([-d[:, 1] / L, d[:, 0] / L])
    C = -(N * A).sum(axis=1)
    return N, C


def _segs(V):
    return np.column_stack([V, np.roll(V, -1, axis=0)])


def oracle_qmec_convex(poly: Polygon, q, eps: float = None) -> QueryAnswer:
    """Largest empty circle containing q inside a convex polygon.

    Candidates: circles tangent to three edge lines that contain q, and
    circles tangent to two edge lines passing through q (both roots of the
    quadratic along the pair's bisector).  Emptiness is checked against the
    actual edges.
    """
    eps = EPS_GEOM if eps is None else eps
    if point_in_polygon(poly, q) is not Location.INSIDE:
        return QueryAnswer.unbounded()
    V = np.array(poly.vertices, dtype=float)
    n = len(V)
    N, C = _edge_lines(V)
    qx, qy = float(q[0]), float(q[1])
    xs, ys, rs = [], [], []
    tri = np.array(list(combinations(range(n), 3)), dtype=int)
    A = np.stack([np.column_stack([N[tri[:, k]], -np.ones(len(tri))]) for k in range(3)], axis=1)
    det = np.linalg.det(A)
    ok = np.abs(det) > 1e-12
    if ok.any():
        sol = np.linalg.solve(A[ok], -C[tri[ok]][..., None])[..., 0]
        inq = np.hypot(sol[:, 0] - qx, sol[:, 1] - qy) <= sol[:, 2] + eps
        xs.append(sol[inq, 0]), ys.append(sol[inq, 1]), rs.append(sol[inq, 2])
    pi, pj = np.triu_indices(n, 1)
    m = N[pi] - N[pj]
    mm = (m * m).sum(axis=1)
    keep = mm > 1e-24
    pi, pj, m, mm = pi[keep], pj[keep], m[keep], mm[keep]
    # centre line of each pair: m.c = C_j - C_i, direction d
    c0 = m * ((C[pj] - C[pi]) / mm)[:, None]
    d = np.column_stack([-m[:, 1], m[:, 0]]) / np.sqrt(mm)[:, None]
    r0 = (N[pi] * c0).sum(axis=1) + C[pi]
    dr = (N[pi] * d).sum(axis=1)
    w = c0 - (qx, qy)
    qa = 1.0 - dr * dr
    qb = 2.0 * ((d * w).sum(axis=1) - r0 * dr)
    qc = (w * w).sum(axis=1) - r0 * r0
    lin = np.abs(qa) < 1e-14
    disc = qb * qb - 4.0 * qa * qc
    real = lin | (disc >= -1e-12 * np.maximum(1.0, qb * qb))
    sq = np.sqrt(np.maximum(disc, 0.0))
    den = np.where(lin, 1.0, 2.0 * qa)
    safe_b = np.where(np.abs(qb) > 1e-14, qb, 1.0)
    for sgn in (-1.0, 1.0):
        t = np.where(lin, -qc / safe_b, (-qb + sgn * sq) / den)
        ok = real & ~(lin & (np.abs(qb) <= 1e-14))
        xs.append(c0[ok, 0] + t[ok] * d[ok, 0])
        ys.append(c0[ok, 1] + t[ok] * d[ok, 1])
        rs.append(r0[ok] + t[ok] * dr[ok])
    if not xs:
        return QueryAnswer.null()
    x, y, r = np.concatenate(xs), np.concatenate(ys), np.concatenate(rs)
    keep = r > 0
    x, y, r = x[keep], y[keep], r[keep]
    inside = kernels.inside_polygon(x, y, V)
    clr = kernels.min_seg_dist(x, y, _segs(V))
    good = inside & (clr >= r - 1e-9 * np.maximum(1.0, r))
    if not good.any():
        return QueryAnswer.null()
    k = int(np.argmax(np.where(good, r, -1.0)))
    return _bounded(x[k], y[k], r[k])


# --- simple polygons: grid + compass refinement -------------------------------------


class SimpleOracle:
    """Numeric maximizer of clearance(c) subject to |c - q| <= clearance(c).

    The clearance grid does not depend on q, so it is computed once per
    polygon and reused across queries.
    """

    def __init__(self, poly: Polygon, grid: int = 400, seeds: int = 32, step: float = 1e-7):
        self.poly = poly
        self.V = np.array(poly.vertices, dtype=float)
        self.S = _segs(self.V)
        x0, x1, y0, y1 = poly.bbox()
        hx, hy = (x1 - x0) / grid, (y1 - y0) / grid
        gx = x0 + (np.arange(grid) + 0.5) * hx
        gy = y0 + (np.arange(grid) + 0.5) * hy
        X, Y = np.meshgrid(gx, gy)
        X, Y = X.ravel(), Y.ravel()
        inside = kernels.inside_polygon(X, Y, self.V)
        self.gx, self.gy = X[inside], Y[inside]
        self.gr = kernels.min_seg_dist(self.gx, self.gy, self.S)
        self.h = max(hx, hy)
        self.seeds = seeds
        self.step = step

    def query(self, q) -> QueryAnswer:
        if point_in_polygon(self.poly, q) is not Location.INSIDE:
            raise OutsidePolygon(f"{tuple(q)} is not strictly inside the polygon")
        qx, qy = float(q[0]), float(q[1])
        feas = np.hypot(self.gx - qx, self.gy - qy) <= self.gr
        idx = np.nonzero(feas)[0]
        idx = idx[np.argsort(-self.gr[idx], kind="stable")[: self.seeds]]
        starts = [(qx, qy)] + [(float(self.gx[k]), float(self.gy[k])) for k in idx]
        best = self._ray_search(qx, qy)
        for sx, sy in starts:
            x, y, r = kernels.refine_constrained(sx, sy, qx, qy, self.S, self.V, self.h, self.step, 16)
            if r > best[0]:
                best = (r, x, y)
        return _bounded(best[1], best[2], best[0])

    def _reach(self, qx, qy, th):
        """Largest rho with clearance(q + rho u) >= rho along each direction th.

        clearance is 1-Lipschitz, so clearance(q + rho u) - rho never
        increases with rho and bisection is exact.
        """
        ux, uy = np.cos(th), np.sin(th)
        lo = np.zeros(len(th))
        hi = np.full(len(th), self.h * 400.0 * 1.5)
        for _ in range(52):
            mid = 0.5 * (lo + hi)
            ok = kernels.min_seg_dist(qx + mid * ux, qy + mid * uy, self.S) >= mid
            lo = np.where(ok, mid, lo)
            hi = np.where(ok, hi, mid)
        return lo

    def _ray_search(self, qx, qy, rays: int = 720, keep: int = 8):
        """Best circle through q: maximize the reach over directions.

        Unless the optimum is an interior clearance maximum (found by the
        grid seeds), its circle passes through q, so its radius is the
        reach along its direction.
        """
        th = np.linspace(0.0, 2.0 * math.pi, rays, endpoint=False)
        rho = self._reach(qx, qy, th)
        dth = th[1] - th[0]
        top = th[np.argsort(-rho)[:keep]]
        a, b = top - dth, top + dth
        g = (math.sqrt(5.0) - 1.0) / 2.0
        # golden-section on all kept brackets at once
        for _ in range(30):
            c, d = b - g * (b - a), a + g * (b - a)
            r = self._reach(qx, qy, np.concatenate([c, d]))
            left = r[:keep] >= r[keep:]
            b = np.where(left, d, b)
            a = np.where(left, a, c)
        cand = np.concatenate([0.5 * (a + b), top])
        r = self._reach(qx, qy, cand)
        k = int(np.argmax(r))
        return float(r[k]), qx + r[k] * math.cos(cand[k]), qy + r[k] * math.sin(cand[k])


def oracle_qmec_simple(poly: Polygon, q, oracle: SimpleOracle = None) -> QueryAnswer:
    if point_in_polygon(poly, q) is not Location.INSIDE:
        raise OutsidePolygon(f"{tuple(q)} is not strictly inside the polygon")
    return (oracle or SimpleOracle(poly)).query(q)


# --- rectangles ----------------------------------------------------------------------


def oracle_mers(points, region: AxisRect) -> list:
    """All maximal empty rectangles by testing every tuple of candidate sides."""
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    if not len(P):
        return [region]
    xsv = np.array(sorted({region.xmin, region.xmax, *P[:, 0].tolist()}))
    ysv = np.array(sorted({region.ymin, region.ymax, *P[:, 1].tolist()}))
    XA, XB = (xsv[list(k)] for k in zip(*combinations(range(len(xsv)), 2)))
    YA, YB = (ysv[list(k)] for k in zip(*combinations(range(len(ysv)), 2)))
    px, py = P[:, 0], P[:, 1]
    inx = (px[None, :] > XA[:, None]) & (px[None, :] < XB[:, None])  # (X, n)
    iny = (py[None, :] > YA[:, None]) & (py[None, :] < YB[:, None])  # (Y, n)
    hit = (inx[:, None, :] & iny[None, :, :]).any(axis=2)
    left = (XA == region.xmin)[:, None] | ((px[None, None, :] == XA[:, None, None]) & iny[None]).any(axis=2)
    right = (XB == region.xmax)[:, None] | ((px[None, None, :] == XB[:, None, None]) & iny[None]).any(axis=2)
    bottom = (YA == region.ymin)[None, :] | ((py[None, None, :] == YA[None, :, None]) & inx[:, None]).any(axis=2)
    top = (YB == region.ymax)[None, :] | ((py[None, None, :] == YB[None, :, None]) & inx[:, None]).any(axis=2)
    ok = ~hit & left & right & bottom & top
    return [AxisRect(float(XA[i]), float(XB[i]), float(YA[j]), float(YB[j])) for i, j in zip(*np.nonzero(ok))]


def rect_key(r: AxisRect):
    """Order used to pick among MERs: larger area first, then lexicographic sides."""
    return (-r.area, r.xmin, r.ymin, r.xmax, r.ymax)


def oracle_qmer(points, region: AxisRect, q) -> QueryAnswer:
    if not region.contains(q):
        raise OutsideRegion(f"{tuple(q)} is outside the region")
    best = None
    for r in oracle_mers(points, region):
        if r.contains(q) and (best is None or rect_key(r) < rect_key(best)):
            best = r
    return QueryAnswer.rectangle(best)
