"""Largest empty circle containing q for a planar point set.

The Voronoi diagram comes from the Delaunay triangulation (Qhull).  Every
unbounded edge receives one artificial vertex whose MEC dominates all finite
vertex MECs, placed so that artificial MECs never share a point inside the
convex hull.  A query asks the LCQ for the largest vertex MEC containing q and
then inspects the few edges that could still hold a larger containing circle.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull, Delaunay, QhullError

from .errors import CollinearInput, DegenerateInput, PlacementFailed
from .geometry import EPS_GEOM, Circle, Point, QueryAnswer, orient2d
from .lcq import CircleSet, LcqTree

PLACEMENT_CAP = 64
OV_BOUND = 36


@dataclass
class VEdge:
    a: int  # finite vertex
    b: int  # other finite vertex, or the artificial vertex of a ray
    sites: tuple
    unbounded: bool
    # the edge is {m + t*d : t in [ta, tb]} with r(t)^2 = h^2 + t^2
    m: tuple
    d: tuple
    h: float
    ta: float
    tb: float

    def point(self, t: float):
        return (self.m[0] + t * self.d[0], self.m[1] + t * self.d[1])

    def radius(self, t: float) -> float:
        return math.hypot(self.h, t)

    def circle(self, t: float) -> Circle:
        return Circle(Point(*self.point(t)), self.radius(t))


@dataclass
class VoronoiDiagram:
    sites: np.ndarray
    pos: list
    radius: list
    artificial: list
    edges: list
    adj: list  # vertex -> [(neighbour, edge id)]
    hull: list  # site indices, counter-clockwise
    vsites: list  # vertex -> sites on its MEC
    edge_of_artificial: dict = field(default_factory=dict)

    @property
    def finite(self) -> list:
        return [v for v in range(len(self.pos)) if not self.artificial[v]]

    def circle(self, v: int) -> Circle:
        return Circle(Point(*self.pos[v]), self.radius[v])

    def smaller(self, a: int, b: int) -> bool:
        """MEC_a below MEC_b in the query order; equal radii rank the smaller id higher."""
        ra, rb = self.radius[a], self.radius[b]
        return ra < rb or (ra == rb and a > b)

    def r_max(self) -> float:
        return max(self.radius[v] for v in self.finite)


def _check_sites(points) -> np.ndarray:
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(P) < 3:
        raise DegenerateInput(f"need at least 3 points, got {len(P)}")
    if not np.all(np.isfinite(P)):
        raise DegenerateInput("non-finite coordinate")
    order = np.lexsort((P[:, 1], P[:, 0]))
    S = P[order]
    for k in range(len(S) - 1):
        if abs(S[k + 1, 0] - S[k, 0]) <= EPS_GEOM and abs(S[k + 1, 1] - S[k, 1]) <= EPS_GEOM:
            raise DegenerateInput(f"duplicate point near ({S[k, 0]:.12g}, {S[k, 1]:.12g})")
    a = tuple(P[0])
    far = int(np.argmax(np.hypot(P[:, 0] - a[0], P[:, 1] - a[1])))
    b = tuple(P[far])
    if all(orient2d(a, b, tuple(p)) == 0.0 for p in P):
        raise CollinearInput("all points are collinear")
    return P


def _edge_frame(P, i, j, inner):
    """Bisector frame of sites i, j with d pointing away from ``inner``."""
    p, q = P[i], P[j]
    m = (0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]))
    ex, ey = q[0] - p[0], q[1] - p[1]
    L = math.hypot(ex, ey)
    d = (-ey / L, ex / L)
    if (inner[0] - m[0]) * d[0] + (inner[1] - m[1]) * d[1] > 0.0:
        d = (-d[0], -d[1])
    return m, d, 0.5 * L


def _t_of(m, d, x) -> float:
    return (x[0] - m[0]) * d[0] + (x[1] - m[1]) * d[1]


def build_voronoi(points) -> VoronoiDiagram:
    P = _check_sites(points)
    try:
        tri = Delaunay(P)
    except QhullError as exc:
        raise DegenerateInput(f"triangulation failed: {exc}") from None
    if len(tri.coplanar):
        raise DegenerateInput(f"point {int(tri.coplanar[0][0])} was dropped by the triangulation")
    T = tri.simplices
    A, B, C = P[T[:, 0]], P[T[:, 1]], P[T[:, 2]]
    bx, by = B[:, 0] - A[:, 0], B[:, 1] - A[:, 1]
    cx, cy = C[:, 0] - A[:, 0], C[:, 1] - A[:, 1]
    D = 2.0 * (bx * cy - by * cx)
    ux = (cy * (bx * bx + by * by) - by * (cx * cx + cy * cy)) / D
    uy = (bx * (cx * cx + cy * cy) - cx * (bx * bx + by * by)) / D
    pos = [(float(A[k, 0] + ux[k]), float(A[k, 1] + uy[k])) for k in range(len(T))]
    radius = [float(math.hypot(ux[k], uy[k])) for k in range(len(T))]
    nv = len(T)

    artificial = [False] * nv
    edges, adj = [], [[] for _ in range(nv)]
    e2e = {}
    for k in range(nv):
        for s in range(3):
            i, j = int(T[k, (s + 1) % 3]), int(T[k, (s + 2) % 3])
            nb = int(tri.neighbors[k, s])
            key = (min(i, j), max(i, j))
            if nb >= 0:
                if key in e2e:
                    continue
                e2e[key] = True
                a, b = (k, nb) if radius[k] <= radius[nb] else (nb, k)
                m, d, h = _edge_frame(P, i, j, pos[b])
                # d points from the far side toward b; a lies at smaller t
                d = (-d[0], -d[1])
                ta, tb = _t_of(m, d, pos[a]), _t_of(m, d, pos[b])
                if ta > tb:
                    d = (-d[0], -d[1])
                    ta, tb = -ta, -tb
                edges.append(VEdge(a, b, key, False, m, d, h, ta, tb))
            else:
                # hull edge: the ray leaves through the side opposite vertex T[k, s]
                opp = P[int(T[k, s])]
                m, d, h = _edge_frame(P, i, j, opp)
                ta = _t_of(m, d, pos[k])
                edges.append(VEdge(k, -1, key, True, m, d, h, ta, math.inf))
    hull = [int(v) for v in ConvexHull(P).vertices]
    vsites = [tuple(sorted(int(s) for s in T[k])) for k in range(nv)]
    vd = VoronoiDiagram(P, pos, radius, artificial, edges, adj, hull, vsites)
    for eid, e in enumerate(edges):
        if not e.unbounded:
            if e.tb - e.ta <= EPS_GEOM:
                raise DegenerateInput(f"Voronoi edge {eid} has zero length (cocircular sites)")
            adj[e.a].append((e.b, eid))
            adj[e.b].append((e.a, eid))
    return vd


class _Cap:
    """Disk centred at m + t d on the ray of chord sites (i, j).

    Membership is tested through f(x) = h^2 - |x - m|^2 + 2 t d.(x - m),
    positive exactly inside the disk; unlike r - |x - c| it stays accurate
    when t is huge, and it vanishes exactly at the two chord sites.
    """

    def __init__(self, e: VEdge, t: float):
        self.m, self.d, self.h, self.t = e.m, e.d, e.h, t
        self.sites = e.sites
        self.R = math.hypot(e.h, t)

    def f(self, x, site: int = -1) -> float:
        if site in self.sites:
            return 0.0
        wx, wy = x[0] - self.m[0], x[1] - self.m[1]
        return self.h * self.h - wx * wx - wy * wy + 2.0 * self.t * (self.d[0] * wx + self.d[1] * wy)

    def depth(self, x) -> float:
        # first-order distance inside the boundary
        return self.f(x) / (2.0 * self.R)

    def on_segment(self, p, q, sp: int, sq: int):
        """Open parameter interval of p + u (q - p), u in [0, 1], inside the disk."""
        ex, ey = q[0] - p[0], q[1] - p[1]
        A = -(ex * ex + ey * ey)
        wx, wy = p[0] - self.m[0], p[1] - self.m[1]
        B = -2.0 * (wx * ex + wy * ey) + 2.0 * self.t * (self.d[0] * ex + self.d[1] * ey)
        C = self.f(p, sp)
        if sq in self.sites:
            # q is a root: f(u) = A u^2 + B u + C with f(1) = 0 exactly
            B = -A - C
        disc = B * B - 4.0 * A * C
        if disc <= 0.0:
            return None
        sd = math.sqrt(disc)
        qq = -0.5 * (B + math.copysign(sd, B))
        r1 = qq / A
        r2 = C / qq if qq != 0.0 else r1
        lo, hi = max(min(r1, r2), 0.0), min(max(r1, r2), 1.0)
        return (lo, hi) if hi > lo else None


def _caps_overlap_in_hull(c1: _Cap, c2: _Cap, hull_pts, hull_ids, tol: float) -> float:
    """Depth of the deepest found point inside both disks and the hull; 0 if none.

    The lens and the hull are convex.  If they share interior points then
    either a hull edge crosses the lens or the lens's common chord (a piece of
    the radical line f1 = f2) meets the hull interior.
    """
    best = 0.0
    n = len(hull_pts)
    for k in range(n):
        p, q = hull_pts[k], hull_pts[(k + 1) % n]
        sp, sq = hull_ids[k], hull_ids[(k + 1) % n]
        iv, jv = c1.on_segment(p, q, sp, sq), c2.on_segment(p, q, sp, sq)
        if iv is None or jv is None:
            continue
        lo, hi = max(iv[0], jv[0]), min(iv[1], jv[1])
        if hi > lo:
            u = 0.5 * (lo + hi)
            x = (p[0] + u * (q[0] - p[0]), p[1] + u * (q[1] - p[1]))
            best = max(best, min(c1.depth(x), c2.depth(x)))
    # radical line a.x = b, from f1(x) - f2(x) = 0 (the |x|^2 terms cancel)
    ax = 2.0 * (c1.m[0] - c2.m[0]) + 2.0 * (c1.t * c1.d[0] - c2.t * c2.d[0])
    ay = 2.0 * (c1.m[1] - c2.m[1]) + 2.0 * (c1.t * c1.d[1] - c2.t * c2.d[1])
    norm = math.hypot(ax, ay)
    if norm > 0.0:
        ax, ay = ax / norm, ay / norm
        # foot of the line from hull vertex 0
        o = hull_pts[0]
        g = c1.f(o, hull_ids[0]) - c2.f(o, hull_ids[0])
        x0 = (o[0] - g / norm * ax, o[1] - g / norm * ay)
        u0, u1 = -math.inf, math.inf
        dx, dy = -ay, ax
        for k in range(n):
            p, q = hull_pts[k], hull_pts[(k + 1) % n]
            # inside means left of p->q: cross(q - p, x - p) > 0
            ex, ey = q[0] - p[0], q[1] - p[1]
            c0 = ex * (x0[1] - p[1]) - ey * (x0[0] - p[0])
            c1d = ex * dy - ey * dx
            if c1d > 0.0:
                u0 = max(u0, -c0 / c1d)
            elif c1d < 0.0:
                u1 = min(u1, -c0 / c1d)
            elif c0 <= 0.0:
                u1 = -math.inf
        if u1 > u0:
            # f1 along the line is -u^2 + beta u + gamma: maximize on [u0, u1]
            beta = -2.0 * ((x0[0] - c1.m[0]) * dx + (x0[1] - c1.m[1]) * dy) + 2.0 * c1.t * (c1.d[0] * dx + c1.d[1] * dy)
            u = min(max(0.5 * beta, u0), u1)
            x = (x0[0] + u * dx, x0[1] + u * dy)
            best = max(best, min(c1.depth(x), c2.depth(x)))
    return best if best > tol else 0.0


def place_artificial_vertices(vd: VoronoiDiagram) -> VoronoiDiagram:
    """Put one artificial vertex on every ray; see the placement notes in the README."""
    R = vd.r_max()
    rays = [eid for eid, e in enumerate(vd.edges) if e.unbounded]
    # t along each ray where the MEC radius is 2 R
    t = {}
    for eid in rays:
        e = vd.edges[eid]
        t[eid] = math.sqrt(max(4.0 * R * R - e.h * e.h, 0.0))
    hull_pts = [tuple(vd.sites[k]) for k in vd.hull]
    scale = max(1.0, float(np.ptp(vd.sites, axis=0).max()))
    tol = EPS_GEOM * scale
    for _ in range(PLACEMENT_CAP + 1):
        worst, pair = 0.0, None
        caps = [_Cap(vd.edges[eid], t[eid]) for eid in rays]
        for x in range(len(rays)):
            for y in range(x + 1, len(rays)):
                ov = _caps_overlap_in_hull(caps[x], caps[y], hull_pts, vd.hull, tol)
                if ov > worst:
                    worst, pair = ov, (rays[x], rays[y])
        if pair is None:
            break
        for eid in pair:
            e = vd.edges[eid]
            t[eid] = e.ta + 2.0 * (t[eid] - e.ta)
    else:
        raise PlacementFailed(f"artificial vertices still overlap inside the hull after {PLACEMENT_CAP} rounds")
    for eid in rays:
        e = vd.edges[eid]
        v = len(vd.pos)
        vd.pos.append(e.point(t[eid]))
        vd.radius.append(e.radius(t[eid]))
        vd.artificial.append(True)
        vd.vsites.append(e.sites)
        vd.adj.append([])
        e.b = v
        vd.adj[e.a].append((v, eid))
        vd.adj[v].append((e.a, eid))
        vd.edge_of_artificial[v] = eid
    return vd


def compute_overlapping_edges(vd: VoronoiDiagram, v: int) -> list:
    """Edges ending a rising path from v whose equal-size MEC overlaps MEC_v."""
    rv, pv = vd.radius[v], vd.pos[v]
    seen = {v}
    dq = deque([v])
    out = set()
    while dq:
        x = dq.popleft()
        for w, eid in vd.adj[x]:
            if w == v:
                continue
            if vd.smaller(w, v):
                if w not in seen:
                    seen.add(w)
                    dq.append(w)
            else:
                e = vd.edges[eid]
                if eid in out:
                    continue
                t = _crossing_from(e, x, rv)
                c = e.point(t)
                if math.hypot(c[0] - pv[0], c[1] - pv[1]) < 2.0 * rv + EPS_GEOM:
                    out.add(eid)
    return sorted(out)


def _crossing_from(e: VEdge, x: int, rho: float) -> float:
    """Point on e where the radius first equals rho when walking from vertex x."""
    s = math.sqrt(max(rho * rho - e.h * e.h, 0.0))
    lo, hi = e.ta, e.tb
    start = lo if x == e.a else hi
    cands = [z for z in (-s, s) if lo - 1e-12 <= z <= hi + 1e-12]
    if not cands:
        return start
    return min(cands, key=lambda z: abs(z - start))


def largest_mec_on_edge_containing(vd: VoronoiDiagram, edge: int, q, eps: float = None) -> Optional[Circle]:
    """Largest circle centred on the edge (rays taken whole) that holds q.

    Along the edge r(t)^2 = h^2 + t^2 while |x(t) - q|^2 is a quadratic with
    the same leading term, so containment is one linear inequality in t and
    the optimum sits at an end of the feasible interval.
    """
    eps = EPS_GEOM if eps is None else eps
    e = vd.edges[edge]
    lo, hi = e.ta, (math.inf if e.unbounded else e.tb)
    wx, wy = e.m[0] - q[0], e.m[1] - q[1]
    A = 2.0 * (e.d[0] * wx + e.d[1] * wy)
    B = e.h * e.h - (wx * wx + wy * wy)
    if A > 0.0:
        hi = min(hi, B / A)
    elif A < 0.0:
        lo = max(lo, B / A)
    elif B < 0.0:
        hi = -math.inf
    if hi < lo:
        # q on the boundary of an end circle: rounding may flip the interval
        if lo - hi > eps * max(1.0, abs(lo)):
            return None
        hi = lo
    if math.isinf(hi):
        return None
    c = e.circle(hi if abs(hi) >= abs(lo) else lo)
    if math.hypot(c.center[0] - q[0], c.center[1] - q[1]) > c.radius + eps * max(1.0, c.radius):
        return None
    return c


@dataclass
class PointsQmecIndex:
    vd: VoronoiDiagram
    lcq: LcqTree
    overlapping: dict
    stats: dict = field(default_factory=dict)

    def strictly_inside_hull(self, q) -> bool:
        h = [tuple(self.vd.sites[k]) for k in self.vd.hull]
        n = len(h)
        return all(orient2d(h[k], h[(k + 1) % n], q) > 0.0 for k in range(n)) and all(
            _seg_dist(q, h[k], h[(k + 1) % n]) > EPS_GEOM for k in range(n)
        )


def _seg_dist(p, a, b) -> float:
    ex, ey = b[0] - a[0], b[1] - a[1]
    L2 = ex * ex + ey * ey
    t = min(max(((p[0] - a[0]) * ex + (p[1] - a[1]) * ey) / L2, 0.0), 1.0)
    return math.hypot(p[0] - a[0] - t * ex, p[1] - a[1] - t * ey)


def preprocess_points(points) -> PointsQmecIndex:
    vd = place_artificial_vertices(build_voronoi(points))
    cs = CircleSet([vd.circle(v) for v in range(len(vd.pos))], validate=False)
    ov = {v: compute_overlapping_edges(vd, v) for v in vd.finite}
    worst = max((len(x) for x in ov.values()), default=0)
    if worst > OV_BOUND:
        raise AssertionError(f"|O_v| = {worst} exceeds {OV_BOUND}")
    idx = PointsQmecIndex(vd, LcqTree(cs), ov)
    idx.stats = {"vertices": len(vd.pos), "max_ov": worst, "lcq_depth": idx.lcq.depth}
    return idx


def query_points(idx: PointsQmecIndex, q) -> QueryAnswer:
    if not idx.strictly_inside_hull(q):
        return QueryAnswer.unbounded()
    vd = idx.vd
    top = idx.lcq.query(q)
    if top.circle is None:
        # q inside the hull always lies in some Delaunay circumcircle
        raise AssertionError(f"no vertex MEC contains {tuple(q)}")
    v = top.witness
    if vd.artificial[v]:
        c = largest_mec_on_edge_containing(vd, vd.edge_of_artificial[v], q)
        return QueryAnswer.bounded(c if c is not None and c.radius > top.circle.radius else top.circle, witness=v)
    best = top.circle
    for eid in idx.overlapping[v]:
        c = largest_mec_on_edge_containing(vd, eid, q)
        if c is not None and c.radius > best.radius:
            best = c
    return QueryAnswer.bounded(best, witness=v)


def next_step(vd: VoronoiDiagram, c: int, target: int) -> Optional[int]:
    """Neighbour of c across the arc of MEC_c that holds both crossings with MEC_target."""
    C, T = vd.circle(c), vd.circle(target)
    for w, _ in vd.adj[c]:
        if w == target:
            return w
    dx, dy = T.center[0] - C.center[0], T.center[1] - C.center[1]
    d = math.hypot(dx, dy)
    if d >= C.radius + T.radius or d <= abs(C.radius - T.radius):
        return None
    # the arc of C inside C' holds no site and is centred on the line of centres,
    # so its midpoint names the arc even when a crossing lands on a shared site
    x = math.atan2(dy, dx) % (2 * math.pi)
    ang = sorted(
        (math.atan2(vd.sites[s][1] - C.center[1], vd.sites[s][0] - C.center[0]) % (2 * math.pi), s)
        for s in vd.vsites[c]
    )
    k = len(ang) - 1
    for i in range(len(ang)):
        if ang[i][0] <= x:
            k = i
    pair = tuple(sorted((ang[k][1], ang[(k + 1) % len(ang)][1])))
    for w, eid in vd.adj[c]:
        if vd.edges[eid].sites == pair:
            return w
    return None


def pi_path(vd: VoronoiDiagram, c: int, target: int) -> list:
    """The vertex path built by repeated next steps from c toward ``target``."""
    path = [c]
    cur = c
    for _ in range(len(vd.pos) + 1):
        if cur == target:
            return path
        nxt = next_step(vd, cur, target)
        if nxt is None:
            raise PlacementFailed(f"no next step from {cur} toward {target}")
        path.append(nxt)
        cur = nxt
    raise PlacementFailed(f"path from {c} toward {target} did not terminate")
