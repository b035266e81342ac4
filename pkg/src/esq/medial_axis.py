"""Medial axis of a simple polygon as a tree of clearance-monotone arcs.

Sites are the polygon edges (ids ``0..n-1``) and the reflex vertices (id
``n + j`` for vertex j).  Axis nodes are the centres of circles touching three
or more sites, the convex vertices (leaves, clearance 0) and degree-2
breakpoints inserted wherever the clearance along a bisector turns from
decreasing to increasing.  Every arc is therefore monotone; after orientation
``arc.u`` is its low end and ``arc.v`` its peakward end.

Convex polygons use an O(n log n) wavefront (edge-collapse) construction.
General simple polygons use a direct construction over site triples, which is
quartic in the worst case but adequate for the polygon sizes handled here.
"""
from __future__ import annotations

import bisect
import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from . import kernels
from .errors import DegenerateInput, GeometryError, NotConvex, OutsidePolygon, PreconditionViolated
from .geometry import Circle, Location, Point, Polygon, orient2d, point_in_polygon

TOL_REL = 1e-9
BISECT_STEPS = 60


# --- sites ---------------------------------------------------------------------


class Sites:
    """Edges and reflex vertices of a polygon with their line data.

    The signed distance of x to the supporting line of edge i is
    ``N[i] . x + C[i]``, positive inside the polygon.
    """

    def __init__(self, poly: Polygon):
        self.poly = poly
        V = np.array(poly.vertices, dtype=float)
        self.n = n = len(V)
        self.V = V
        B = np.roll(V, -1, axis=0)
        D = B - V
        self.L = np.hypot(D[:, 0], D[:, 1])
        self.U = D / self.L[:, None]
        self.N = np.column_stack([-self.U[:, 1], self.U[:, 0]])
        self.C = -(self.N * V).sum(axis=1)
        self.segs = np.column_stack([V, B])
        self.reflex = set(poly.reflex_vertices())
        self.vl = V.tolist()
        self.Nl = self.N.tolist()
        self.Ul = self.U.tolist()
        self.Cl = self.C.tolist()
        self.Ll = self.L.tolist()

    def is_edge(self, s: int) -> bool:
        return s < self.n

    def point(self, s: int):
        return self.vl[s - self.n]

    def distance(self, s: int, x) -> float:
        if s >= self.n:
            p = self.vl[s - self.n]
            return math.hypot(x[0] - p[0], x[1] - p[1])
        a = self.vl[s]
        u = self.Ul[s]
        t = (x[0] - a[0]) * u[0] + (x[1] - a[1]) * u[1]
        t = min(max(t, 0.0), self.Ll[s])
        return math.hypot(x[0] - a[0] - t * u[0], x[1] - a[1] - t * u[1])

    def foot_direction(self, s: int, x):
        """Unit direction from x towards its closest point on site s."""
        if s >= self.n:
            p = self.vl[s - self.n]
            dx, dy = p[0] - x[0], p[1] - x[1]
            h = math.hypot(dx, dy)
            return (dx / h, dy / h) if h > 0 else (0.0, 0.0)
        nx, ny = self.Nl[s]
        return (-nx, -ny)

    def name(self, s: int) -> str:
        return f"E{s}" if s < self.n else f"V{s - self.n}"


# --- arcs ----------------------------------------------------------------------


@dataclass
class Arc:
    """Axis arc from node u (t = 0) to node v (t = 1).

    ``kind`` is ``"segment"`` (edge/edge or vertex/vertex bisector) or
    ``"parabola"`` (edge/vertex bisector, written in the edge's frame).
    """

    id: int
    u: int
    v: int
    sites: tuple
    kind: str
    p0: tuple
    p1: tuple
    r0: float
    r1: float
    focus: Optional[tuple] = None
    frame: Optional[tuple] = None  # (ax, ay, ux, uy, nx, ny, s0, s1, sp, hp)
    mountain: int = -1

    def point(self, t: float):
        if self.frame is None:
            return (self.p0[0] + t * (self.p1[0] - self.p0[0]), self.p0[1] + t * (self.p1[1] - self.p0[1]))
        ax, ay, ux, uy, nx, ny, s0, s1, sp, hp = self.frame
        s = s0 + t * (s1 - s0)
        h = ((s - sp) ** 2 + hp * hp) / (2.0 * hp)
        return (ax + s * ux + h * nx, ay + s * uy + h * ny)

    def radius(self, t: float) -> float:
        if self.frame is not None:
            ax, ay, ux, uy, nx, ny, s0, s1, sp, hp = self.frame
            s = s0 + t * (s1 - s0)
            return ((s - sp) ** 2 + hp * hp) / (2.0 * hp)
        if self.focus is not None:
            x, y = self.point(t)
            return math.hypot(x - self.focus[0], y - self.focus[1])
        return self.r0 + t * (self.r1 - self.r0)

    def circle(self, t: float) -> Circle:
        return Circle(Point(*self.point(t)), self.radius(t))

    def t_at_radius(self, rho: float) -> float:
        """Parameter where the clearance equals rho (the arc is monotone)."""
        if self.r1 == self.r0:
            return 1.0
        if self.frame is not None:
            ax, ay, ux, uy, nx, ny, s0, s1, sp, hp = self.frame
            d = math.sqrt(max(2.0 * hp * rho - hp * hp, 0.0))
            s = sp + d if 0.5 * (s0 + s1) >= sp else sp - d
            t = (s - s0) / (s1 - s0) if s1 != s0 else 1.0
        elif self.focus is not None:
            dx, dy = self.p1[0] - self.p0[0], self.p1[1] - self.p0[1]
            ll = dx * dx + dy * dy
            fx, fy = self.focus[0] - self.p0[0], self.focus[1] - self.p0[1]
            tf = (fx * dx + fy * dy) / ll
            h2 = fx * fx + fy * fy - tf * tf * ll
            w = math.sqrt(max(rho * rho - h2, 0.0) / ll)
            t = tf + w if 0.5 >= tf else tf - w
        else:
            t = (rho - self.r0) / (self.r1 - self.r0)
        return min(max(t, 0.0), 1.0)

    def reversed(self) -> "Arc":
        fr = None
        if self.frame is not None:
            f = self.frame
            fr = f[:6] + (f[7], f[6]) + f[8:]
        return Arc(self.id, self.v, self.u, self.sites, self.kind, self.p1, self.p0, self.r1, self.r0,
                   self.focus, fr, self.mountain)

    def length(self, steps: int = 16) -> float:
        if self.frame is None:
            return math.hypot(self.p1[0] - self.p0[0], self.p1[1] - self.p0[1])
        pts = [self.point(k / steps) for k in range(steps + 1)]
        return sum(math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(pts, pts[1:]))


@dataclass
class Mountain:
    id: int
    peak: int
    arcs: list
    nodes: list
    valleys: list = field(default_factory=list)


@dataclass
class AxisLocation:
    arc: int
    t: float
    point: tuple


# --- node construction -----------------------------------------------------------


def _solve3(rows, rhs):
    (a, b, c), (d, e, f), (g, h, i) = rows
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if abs(det) < 1e-14:
        return None
    r0, r1, r2 = rhs
    x = (r0 * (e * i - f * h) - b * (r1 * i - f * r2) + c * (r1 * h - e * r2)) / det
    y = (a * (r1 * i - f * r2) - r0 * (d * i - f * g) + c * (d * r2 - r1 * g)) / det
    z = (a * (e * r2 - r1 * h) - b * (d * r2 - r1 * g) + r0 * (d * h - e * g)) / det
    return x, y, z


def _lll(S: Sites, i, j, k):
    N, C = S.Nl, S.Cl
    return _solve3(
        [(N[i][0], N[i][1], -1.0), (N[j][0], N[j][1], -1.0), (N[k][0], N[k][1], -1.0)],
        [-C[i], -C[j], -C[k]],
    )


def _mixed(S: Sites, lines, pts):
    """Centres equidistant from the given lines and points (at least one point)."""
    P = pts[0]
    rows, rhs = [], []
    for s in lines:
        rows.append((S.Nl[s][0], S.Nl[s][1], -1.0))
        rhs.append(-S.Cl[s])
    for p2 in pts[1:]:
        rows.append((2.0 * (p2[0] - P[0]), 2.0 * (p2[1] - P[1]), 0.0))
        rhs.append(p2[0] ** 2 + p2[1] ** 2 - P[0] ** 2 - P[1] ** 2)
    (a0, a1, a2), (b0, b1, b2) = rows
    D = (a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0)
    dd = D[0] ** 2 + D[1] ** 2 + D[2] ** 2
    if dd < 1e-24:
        return []
    # minimum-norm particular solution A^T (A A^T)^-1 rhs
    g00 = a0 * a0 + a1 * a1 + a2 * a2
    g01 = a0 * b0 + a1 * b1 + a2 * b2
    g11 = b0 * b0 + b1 * b1 + b2 * b2
    det = g00 * g11 - g01 * g01
    l0 = (g11 * rhs[0] - g01 * rhs[1]) / det
    l1 = (g00 * rhs[1] - g01 * rhs[0]) / det
    X = (l0 * a0 + l1 * b0, l0 * a1 + l1 * b1, l0 * a2 + l1 * b2)
    wx, wy = X[0] - P[0], X[1] - P[1]
    qa = D[0] ** 2 + D[1] ** 2 - D[2] ** 2
    qb = 2.0 * (wx * D[0] + wy * D[1] - X[2] * D[2])
    qc = wx * wx + wy * wy - X[2] ** 2
    ts = []
    if abs(qa) < 1e-14 * dd:
        if abs(qb) > 1e-300:
            ts.append(-qc / qb)
    else:
        disc = qb * qb - 4.0 * qa * qc
        # tangency at a vertex lying on one of the lines is a double root
        if disc < 0.0 and -disc <= 1e-9 * (qb * qb + abs(4.0 * qa * qc)):
            disc = 0.0
        if disc >= 0.0:
            sq = math.sqrt(disc)
            # stable pair of roots
            qq = -0.5 * (qb + math.copysign(sq, qb))
            if qq != 0.0:
                ts.extend([qq / qa, qc / qq])
            else:
                ts.append(0.0)
    out = []
    for t in ts:
        x, y, r = X[0] + t * D[0], X[1] + t * D[1], X[2] + t * D[2]
        if r > 0.0:
            out.append((x, y, r))
    return out


def _pinned(S: Sites, e: int, v: int, third: int):
    """Centres touching edge e at its endpoint vertex v, and a third site.

    Such a centre lies on the normal of e through v, c = p + rho N, which
    makes the third condition linear in rho (the general solver would see a
    double root here and split it under rounding).
    """
    p = S.point(v)
    nx, ny = S.Nl[e]
    if third < S.n:
        mx, my = S.Nl[third]
        den = 1.0 - (mx * nx + my * ny)
        if abs(den) < 1e-14:
            return []
        rho = (mx * p[0] + my * p[1] + S.Cl[third]) / den
    else:
        w = S.point(third)
        dx, dy = p[0] - w[0], p[1] - w[1]
        den = 2.0 * (nx * dx + ny * dy)
        if abs(den) < 1e-300:
            return []
        rho = -(dx * dx + dy * dy) / den
    if rho <= 0.0:
        return []
    return [(p[0] + rho * nx, p[1] + rho * ny, rho)]


def _candidate_nodes(S: Sites, tol: float):
    """Circle centres touching >= 3 sites, with their contact sets."""
    n = S.n
    edges = list(range(n))
    verts = sorted(S.reflex)
    cands = []
    if n >= 3:
        tri = np.array(list(combinations(edges, 3)), dtype=int)
        A = np.stack([np.column_stack([S.N[tri[:, k]], -np.ones(len(tri))]) for k in range(3)], axis=1)
        b = -S.C[tri]
        det = np.linalg.det(A)
        ok = np.abs(det) > 1e-12
        if ok.any():
            sol = np.linalg.solve(A[ok], b[ok][..., None])[..., 0]
            cands.append(sol[sol[:, 2] > tol])
    mixed = []
    sites = edges + [n + j for j in verts]
    for a, b_, c in combinations(sites, 3):
        trip = (a, b_, c)
        lines = [s for s in trip if s < n]
        if len(lines) == 3:
            continue
        pinned = [(a_, b_) for a_, b_ in combinations(trip, 2) if _same_point(S, a_, b_)]
        if pinned:
            if len(pinned) == 1:
                e, v = sorted(pinned[0])
                third = next(x for x in trip if x not in pinned[0])
                mixed.extend(_pinned(S, e, v, third))
            continue
        pts = [S.vl[s - n] for s in trip if s >= n]
        mixed.extend(_mixed(S, lines, pts))
    if mixed:
        cands.append(np.array(mixed))
    if not cands:
        return []
    X = np.concatenate(cands)
    # near a reflex vertex the solves degrade; no true node is that thin
    X = X[np.all(np.isfinite(X), axis=1) & (X[:, 2] > 1e3 * tol)]
    if not len(X):
        return []
    clr = kernels.min_seg_dist(X[:, 0], X[:, 1], S.segs)
    keep = (np.abs(clr - X[:, 2]) <= tol) & kernels.inside_polygon(X[:, 0], X[:, 1], S.V)
    X = X[keep]
    out = []
    for x, y, r in X.tolist():
        con = _contacts(S, (x, y), r, tol)
        if len(con) >= 3:
            out.append(((x, y), r, con))
    return out


def _contacts(S: Sites, x, r: float, tol: float) -> set:
    """Sites at distance r from x.

    An edge counts when its foot lies on the closed segment; a foot at a
    reflex end also makes that vertex a contact (x is then on the normal line
    through the vertex, where the edge's cell meets the vertex's cell).
    """
    con = set()
    n = S.n
    for i in range(n):
        a = S.vl[i]
        u = S.Ul[i]
        t = (x[0] - a[0]) * u[0] + (x[1] - a[1]) * u[1]
        tc = min(max(t, 0.0), S.Ll[i])
        d = math.hypot(x[0] - a[0] - tc * u[0], x[1] - a[1] - tc * u[1])
        if abs(d - r) > tol:
            continue
        if -tol <= t <= S.Ll[i] + tol:
            con.add(i)
        if t <= tol and i in S.reflex:
            con.add(n + i)
        if t >= S.Ll[i] - tol and (i + 1) % n in S.reflex:
            con.add(n + (i + 1) % n)
    return con


def _same_point(S: Sites, a: int, b: int) -> bool:
    """An edge and its own reflex endpoint touch at one point and bound no arc."""
    if (a < S.n) == (b < S.n):
        return False
    e, v = (a, b) if a < S.n else (b, a)
    j = v - S.n
    return j == e or j == (e + 1) % S.n


def _dedupe(nodes, tol: float):
    out = []
    for pos, r, con in sorted(nodes, key=lambda t: t[0]):
        for k in range(len(out) - 1, -1, -1):
            q, rq, cq = out[k]
            if pos[0] - q[0] > tol:
                out.append((pos, r, set(con)))
                break
            if abs(pos[1] - q[1]) <= tol and abs(r - rq) <= tol:
                cq |= con
                break
        else:
            out.append((pos, r, set(con)))
    return out


def _pair_param(S: Sites, pair, x) -> float:
    a, b = pair
    n = S.n
    if a < n and b < n:
        dx, dy = S.Nl[a][0] - S.Nl[b][0], S.Nl[a][1] - S.Nl[b][1]
        return -dy * x[0] + dx * x[1]
    if a >= n and b >= n:
        p, q = S.point(a), S.point(b)
        return -(q[1] - p[1]) * x[0] + (q[0] - p[0]) * x[1]
    e = a if a < n else b
    o = S.vl[e]
    return (x[0] - o[0]) * S.Ul[e][0] + (x[1] - o[1]) * S.Ul[e][1]


def _edge_vertex_frame(S: Sites, e: int, v: int):
    o = S.vl[e]
    ux, uy = S.Ul[e]
    nx, ny = S.Nl[e]
    p = S.point(v)
    sp = (p[0] - o[0]) * ux + (p[1] - o[1]) * uy
    hp = (p[0] - o[0]) * nx + (p[1] - o[1]) * ny
    return o, (ux, uy), (nx, ny), sp, hp


def _pair_point(S: Sites, pair, s, su, sv, xu, xv):
    a, b = pair
    n = S.n
    if (a < n) != (b < n):
        e, v = (a, b) if a < n else (b, a)
        o, (ux, uy), (nx, ny), sp, hp = _edge_vertex_frame(S, e, v)
        h = ((s - sp) ** 2 + hp * hp) / (2.0 * hp)
        return (o[0] + s * ux + h * nx, o[1] + s * uy + h * ny)
    w = 0.5 if sv == su else (s - su) / (sv - su)
    return (xu[0] + w * (xv[0] - xu[0]), xu[1] + w * (xv[1] - xu[1]))


def _connect_by_pairs(S: Sites, pos, rad, contacts, tol):
    """Axis edges between nodes sharing an angularly adjacent contact pair."""
    groups: dict = {}
    for k, con in enumerate(contacts):
        x = pos[k]
        if len(con) == 2:
            pairs = [tuple(sorted(con))]
        else:
            def ang(s, x=x):
                d = S.foot_direction(s, x)
                return math.atan2(d[1], d[0])

            order = sorted(con, key=ang)
            pairs = [tuple(sorted((order[i], order[(i + 1) % len(order)]))) for i in range(len(order))]
        for pr in pairs:
            if not _same_point(S, *pr):
                groups.setdefault(pr, []).append(k)
    edges = []
    for pr, members in groups.items():
        members = sorted(set(members), key=lambda k: _pair_param(S, pr, pos[k]))
        for u, v in zip(members, members[1:]):
            su, sv = _pair_param(S, pr, pos[u]), _pair_param(S, pr, pos[v])
            m = _pair_point(S, pr, 0.5 * (su + sv), su, sv, pos[u], pos[v])
            d_site = S.distance(pr[0], m)
            d_other = S.distance(pr[1], m)
            clr = float(kernels.min_seg_dist(np.array([m[0]]), np.array([m[1]]), S.segs)[0])
            if abs(d_site - d_other) <= 1e3 * tol and abs(clr - d_site) <= 1e3 * tol:
                edges.append((u, v, pr))
    return edges


def _convex_wavefront(S: Sites, tol: float):
    """Nodes and edges of the medial axis of a convex polygon.

    Every edge of the shrinking polygon collapses when the bisectors at its
    two ends meet; events are processed in order of their offset distance.
    """
    n = S.n
    pos = [tuple(S.vl[j]) for j in range(n)]
    rad = [0.0] * n
    contacts = [{(j - 1) % n, j} for j in range(n)]
    prev = [(i - 1) % n for i in range(n)]
    nxt = [(i + 1) % n for i in range(n)]
    tail = [(i + 1) % n for i in range(n)]  # node where bisector (i, nxt[i]) starts
    alive = [True] * n
    version = [0] * n
    edges = []
    heap = []

    def push(i):
        c = _lll(S, prev[i], i, nxt[i])
        if c is not None:
            heapq.heappush(heap, (c[2], i, version[i], c))

    for i in range(n):
        push(i)
    count = n
    while count > 3:
        if not heap:
            raise DegenerateInput("wavefront stalled; polygon may be degenerate")
        r, i, ver, c = heapq.heappop(heap)
        if not alive[i] or ver != version[i]:
            continue
        a, b = prev[i], nxt[i]
        k = len(pos)
        pos.append((c[0], c[1]))
        rad.append(c[2])
        contacts.append({a, i, b})
        edges.append((tail[a], k, (a, i)))
        edges.append((tail[i], k, (i, b)))
        alive[i] = False
        count -= 1
        nxt[a], prev[b] = b, a
        tail[a] = k
        for s in (a, b):
            version[s] += 1
            push(s)
    rest = [i for i in range(n) if alive[i]]
    a = rest[0]
    b, c_ = nxt[a], nxt[nxt[a]]
    c = _lll(S, a, b, c_)
    if c is None:
        raise DegenerateInput("last three wavefront edges have no common tangent circle")
    k = len(pos)
    pos.append((c[0], c[1]))
    rad.append(c[2])
    contacts.append({a, b, c_})
    for s in (a, b, c_):
        edges.append((tail[s], k, (s, nxt[s])))
    return pos, rad, contacts, edges


def _contract(pos, rad, contacts, edges, tol):
    """Merge nodes joined by zero-length edges (several contacts at one centre)."""
    parent = list(range(len(pos)))

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for u, v, _ in edges:
        if math.hypot(pos[u][0] - pos[v][0], pos[u][1] - pos[v][1]) <= tol and abs(rad[u] - rad[v]) <= tol:
            a, b = find(u), find(v)
            if a != b:
                parent[max(a, b)] = min(a, b)
    roots = sorted({find(u) for u in range(len(pos))})
    idx = {r: k for k, r in enumerate(roots)}
    npos = [pos[r] for r in roots]
    nrad = [rad[r] for r in roots]
    ncon = [set() for _ in roots]
    for u in range(len(pos)):
        ncon[idx[find(u)]] |= contacts[u]
    nedges = []
    for u, v, pr in edges:
        a, b = idx[find(u)], idx[find(v)]
        if a != b:
            nedges.append((a, b, pr))
    return npos, nrad, ncon, nedges


# --- the axis ----------------------------------------------------------------------


class MedialAxis:
    """Medial axis tree with oriented monotone arcs and navigation helpers.

    Attributes of interest: ``pos``, ``radius`` and ``contacts`` per node,
    ``arcs`` (list of Arc), ``adj`` (node -> arc ids), ``leaf_of_vertex``,
    ``parent``/``parent_arc`` toward each mountain's peak, ``mountains``,
    ``mountain_of_arc`` and ``root`` (the highest peak).
    """

    def __init__(self, poly: Polygon, require_distinct: Optional[bool] = None):
        self.poly = poly
        self.sites = S = Sites(poly)
        self.convex = poly.is_convex()
        self.scale = max(1.0, poly.diameter())
        self.tol = tol = TOL_REL * self.scale
        if require_distinct is None:
            require_distinct = not self.convex
        if self.convex:
            self._leaves = {j: j for j in range(S.n)}
            pos, rad, con, edges = _convex_wavefront(S, tol)
            pos, rad, con, edges = _contract(pos, rad, con, edges, 10 * tol)
        else:
            pos, rad, con, edges = self._simple_build(S, tol)
        self._check_tree(len(pos), edges)
        if require_distinct:
            deg = [0] * len(pos)
            for u, v, _ in edges:
                deg[u] += 1
                deg[v] += 1
            internal = sorted((rad[k], k) for k in range(len(pos)) if deg[k] >= 3)
            for (r1, a), (r2, b) in zip(internal, internal[1:]):
                if r2 - r1 <= 1e-9 * self.scale:
                    raise DegenerateInput(
                        f"internal axis nodes at {pos[a]} and {pos[b]} have equal clearance {r1:.12g}"
                    )
        pos, rad, con, edges = self._split_monotone(S, pos, rad, con, edges)
        self.pos = pos
        self.radius = rad
        self.contacts = [tuple(sorted(c)) for c in con]
        self._edges = edges
        self.leaf_of_vertex = dict(self._leaves)
        self._orient(S)
        self._build_chains(S)
        self._build_lifting()
        self._locator = _ConvexLocator(self) if self.convex else None

    # construction helpers
    def _simple_build(self, S: Sites, tol: float):
        nodes = _dedupe(_candidate_nodes(S, tol), 100 * tol)
        pos, rad, con = [], [], []
        self._leaves = {}
        for j in range(S.n):
            if j in S.reflex:
                continue
            self._leaves[j] = len(pos)
            pos.append(tuple(S.vl[j]))
            rad.append(0.0)
            con.append({(j - 1) % S.n, j})
        for p, r, c in nodes:
            pos.append(p)
            rad.append(r)
            con.append(c)
        return pos, rad, con, _connect_by_pairs(S, pos, rad, con, tol)

    def _check_tree(self, count, edges):
        if len(edges) != count - 1:
            raise DegenerateInput(
                f"medial axis has {count} nodes but {len(edges)} arcs; input is too close to degenerate"
            )
        adj = [[] for _ in range(count)]
        for u, v, _ in edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != count:
            raise DegenerateInput("medial axis is disconnected; input is too close to degenerate")

    def _split_monotone(self, S: Sites, pos, rad, con, edges):
        pos, rad, con = list(pos), list(rad), list(con)
        out = []
        n = S.n
        for u, v, pr in edges:
            a, b = pr
            mid = None
            if (a < n) != (b < n):
                e, w = (a, b) if a < n else (b, a)
                o, (ux, uy), (nx, ny), sp, hp = _edge_vertex_frame(S, e, w)
                su = (pos[u][0] - o[0]) * ux + (pos[u][1] - o[1]) * uy
                sv = (pos[v][0] - o[0]) * ux + (pos[v][1] - o[1]) * uy
                if min(su, sv) + self.tol < sp < max(su, sv) - self.tol:
                    mid = ((o[0] + sp * ux + 0.5 * hp * nx, o[1] + sp * uy + 0.5 * hp * ny), 0.5 * hp)
            elif a >= n and b >= n:
                p, q = S.point(a), S.point(b)
                m = (0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]))
                pu, pv, pm = (_pair_param(S, pr, x) for x in (pos[u], pos[v], m))
                if min(pu, pv) + self.tol < pm < max(pu, pv) - self.tol:
                    mid = (m, 0.5 * math.hypot(q[0] - p[0], q[1] - p[1]))
            if mid is None:
                out.append((u, v, pr))
                continue
            k = len(pos)
            pos.append(mid[0])
            rad.append(mid[1])
            con.append({a, b})
            out.append((u, k, pr))
            out.append((k, v, pr))
        return pos, rad, con, out

    def _make_arc(self, S: Sites, aid, u, v, pr) -> Arc:
        a, b = pr
        n = S.n
        pu, pv = self.pos[u], self.pos[v]
        if (a < n) != (b < n):
            e, w = (a, b) if a < n else (b, a)
            o, (ux, uy), (nx, ny), sp, hp = _edge_vertex_frame(S, e, w)
            su = (pu[0] - o[0]) * ux + (pu[1] - o[1]) * uy
            sv = (pv[0] - o[0]) * ux + (pv[1] - o[1]) * uy
            frame = (o[0], o[1], ux, uy, nx, ny, su, sv, sp, hp)
            return Arc(aid, u, v, pr, "parabola", pu, pv, self.radius[u], self.radius[v], S.point(w), frame)
        focus = S.point(a) if a >= n else None
        return Arc(aid, u, v, pr, "segment", pu, pv, self.radius[u], self.radius[v], focus)

    def _orient(self, S: Sites):
        N = len(self.pos)
        tol = self.tol
        rad = self.radius
        adjn = [[] for _ in range(N)]
        for k, (u, v, pr) in enumerate(self._edges):
            adjn[u].append((v, k))
            adjn[v].append((u, k))
        if self.convex:
            root = self._convex_root(adjn)
        up = [None] * len(self._edges)
        if self.convex:
            adjn = [[] for _ in range(len(self.pos))]
            for k, (u, v, pr) in enumerate(self._edges):
                adjn[u].append((v, k))
                adjn[v].append((u, k))
            seen = {root}
            dq = deque([root])
            while dq:
                x = dq.popleft()
                for w, k in adjn[x]:
                    if w not in seen:
                        seen.add(w)
                        up[k] = x
                        dq.append(w)
        else:
            for k, (u, v, pr) in enumerate(self._edges):
                up[k] = v if rad[v] > rad[u] else u
        N = len(self.pos)
        self.arcs = []
        self.adj = [[] for _ in range(N)]
        for k, (u, v, pr) in enumerate(self._edges):
            lo, hi = (u, v) if up[k] == v else (v, u)
            arc = self._make_arc(S, k, lo, hi, pr)
            self.arcs.append(arc)
            self.adj[lo].append(k)
            self.adj[hi].append(k)
        is_leaf = [len(self.adj[x]) == 1 and self.radius[x] == 0.0 for x in range(N)]
        self.is_leaf = is_leaf
        self.valleys = [x for x in range(N) if not is_leaf[x] and all(self.arcs[k].u == x for k in self.adj[x])]
        self.peaks = [x for x in range(N) if all(self.arcs[k].v == x for k in self.adj[x])]
        valley = set(self.valleys)
        # mountains: arcs connected through non-valley nodes
        parent = list(range(len(self.arcs)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for x in range(N):
            if x in valley:
                continue
            ks = self.adj[x]
            for k in ks[1:]:
                ra, rb = find(ks[0]), find(k)
                if ra != rb:
                    parent[ra] = rb
        groups: dict = {}
        for k in range(len(self.arcs)):
            groups.setdefault(find(k), []).append(k)
        self.mountains = []
        self.mountain_of_arc = [0] * len(self.arcs)
        self.parent = [-1] * N
        self.parent_arc = [-1] * N
        for gid, ks in enumerate(sorted(groups.values(), key=min)):
            nodes = sorted({self.arcs[k].u for k in ks} | {self.arcs[k].v for k in ks})
            peaks = [x for x in nodes if x not in valley and all(self.arcs[k].v == x for k in self.adj[x])]
            if len(peaks) != 1:
                raise DegenerateInput(f"mountain with {len(peaks)} peaks; clearances are too close to call")
            for k in ks:
                self.arcs[k].mountain = gid
                self.mountain_of_arc[k] = gid
                a = self.arcs[k]
                if a.u in valley:
                    continue
                if self.parent[a.u] != -1 and self.parent[a.u] != a.v:
                    raise DegenerateInput(f"axis node {a.u} rises along two arcs")
                self.parent[a.u] = a.v
                self.parent_arc[a.u] = k
            self.mountains.append(
                Mountain(gid, peaks[0], ks, nodes, [x for x in nodes if x in valley])
            )
        for x in self.valleys:
            self.parent[x] = -1
            self.parent_arc[x] = -1
        self.root = max(range(N), key=lambda x: (self.radius[x], -x)) if not self.convex else self._root

    def _convex_root(self, adjn):
        """Highest node; a constant-clearance top is split at its midpoint."""
        rad = self.radius
        rmax = max(rad)
        top = [x for x in range(len(rad)) if rad[x] >= rmax - 10 * self.tol]
        if len(top) == 1:
            self._root = top[0]
            return top[0]
        topset = set(top)
        nbr = {x: [(w, k) for w, k in adjn[x] if w in topset] for x in top}
        ends = [x for x in top if len(nbr[x]) <= 1]
        path = [ends[0]]
        arcs_on = []
        prev = None
        while True:
            x = path[-1]
            step = [(w, k) for w, k in nbr[x] if w != prev]
            if not step:
                break
            prev = x
            path.append(step[0][0])
            arcs_on.append(step[0][1])
        lens = [math.dist(self.pos[a], self.pos[b]) for a, b in zip(path, path[1:])]
        half = 0.5 * sum(lens)
        acc = 0.0
        for seg, (a, b), k in zip(lens, zip(path, path[1:]), arcs_on):
            if acc + seg >= half:
                w = (half - acc) / seg if seg > 0 else 0.0
                if w <= 1e-9:
                    self._root = a
                    return a
                if w >= 1 - 1e-9:
                    self._root = b
                    return b
                m = (self.pos[a][0] + w * (self.pos[b][0] - self.pos[a][0]),
                     self.pos[a][1] + w * (self.pos[b][1] - self.pos[a][1]))
                u, v, pr = self._edges[k]
                r = self.radius[a] + w * (self.radius[b] - self.radius[a])
                x = len(self.pos)
                self.pos.append(m)
                self.radius.append(r)
                self.contacts.append(tuple(sorted(pr)))
                self._edges[k] = (u, x, pr)
                self._edges.append((x, v, pr))
                self._root = x
                return x
            acc += seg
        self._root = top[0]
        return top[0]

    def _build_chains(self, S: Sites):
        """Per site, the arcs bounding its cell sorted along the site."""
        n = S.n
        chains = {}
        for arc in self.arcs:
            for s in arc.sites:
                a, b = self._site_param(S, s, arc.p0), self._site_param(S, s, arc.p1)
                chains.setdefault(s, []).append((min(a, b), max(a, b), arc.id))
        self.chains = {}
        for s, lst in chains.items():
            lst.sort()
            self.chains[s] = ([c[0] for c in lst], [c[1] for c in lst], [c[2] for c in lst])

    def _vertex_ref(self, S: Sites, j):
        nx = S.Nl[(j - 1) % S.n][0] + S.Nl[j][0]
        ny = S.Nl[(j - 1) % S.n][1] + S.Nl[j][1]
        h = math.hypot(nx, ny)
        return nx / h, ny / h

    def _site_param(self, S: Sites, s, x) -> float:
        if s < S.n:
            o = S.vl[s]
            return (x[0] - o[0]) * S.Ul[s][0] + (x[1] - o[1]) * S.Ul[s][1]
        p = S.point(s)
        bx, by = self._vertex_ref(S, s - S.n)
        dx, dy = x[0] - p[0], x[1] - p[1]
        return math.atan2(bx * dy - by * dx, bx * dx + by * dy)

    def _build_lifting(self):
        N = len(self.pos)
        depth = [-1] * N
        order = []
        for m in self.mountains:
            depth[m.peak] = 0
            order.append(m.peak)
        # nodes reached from their parent; BFS by repeated relaxation over parent links
        children = [[] for _ in range(N)]
        for x in range(N):
            if self.parent[x] != -1:
                children[self.parent[x]].append(x)
        dq = deque(order)
        while dq:
            x = dq.popleft()
            for c in children[x]:
                depth[c] = depth[x] + 1
                dq.append(c)
        self.depth = depth
        levels = max(1, max(depth) + 1).bit_length()
        up = [[p if p != -1 else x for x, p in enumerate(self.parent)]]
        for _ in range(levels):
            prev = up[-1]
            up.append([prev[prev[x]] for x in range(N)])
        self.lift = up

    # --- geometry queries ---------------------------------------------------------
    def node_circle(self, x: int) -> Circle:
        return Circle(Point(*self.pos[x]), self.radius[x])

    def node_contains(self, x: int, q, eps: float = None) -> bool:
        eps = self.tol if eps is None else eps
        p = self.pos[x]
        return math.hypot(p[0] - q[0], p[1] - q[1]) <= self.radius[x] + eps

    def clearance_on_arc(self, arc_id: int, t: float) -> float:
        return self.arcs[arc_id].radius(t)

    def nearest_site(self, q) -> int:
        S = self.sites
        best, bs = math.inf, -1
        for i in range(S.n):
            d = S.distance(i, q)
            if d < best:
                best, bs = d, i
        for j in S.reflex:
            d = S.distance(S.n + j, q)
            if d < best - 1e-12 * self.scale:
                best, bs = d, S.n + j
        if bs < S.n:
            # closest point at a reflex end of the edge belongs to the vertex site
            a = S.vl[bs]
            u = S.Ul[bs]
            t = (q[0] - a[0]) * u[0] + (q[1] - a[1]) * u[1]
            if t <= 0.0 and bs in S.reflex:
                return S.n + bs
            if t >= S.Ll[bs] and (bs + 1) % S.n in S.reflex:
                return S.n + (bs + 1) % S.n
        return bs

    def locate(self, q, checked: bool = False) -> AxisLocation:
        """Retract q away from its nearest site onto the boundary of that site's cell.

        The returned point x satisfies q in MEC_x by construction.  Pass
        ``checked=True`` when q is already known to be strictly inside.
        """
        if not checked and point_in_polygon(self.poly, q) is not Location.INSIDE:
            raise OutsidePolygon(f"{tuple(q)} is not strictly inside the polygon")
        s = self._locator.site(q) if self._locator is not None else self.nearest_site(q)
        return self.retract(s, q)

    def retract(self, s: int, q) -> AxisLocation:
        S = self.sites
        x0 = self._site_param(S, s, q)
        los, his, ids = self.chains[s]
        k = bisect.bisect_right(los, x0) - 1
        k = min(max(k, 0), len(ids) - 1)
        while k + 1 < len(ids) and his[k] < x0:
            k += 1
        arc = self.arcs[ids[k]]
        if s < S.n:
            s0 = self._site_param(S, s, arc.p0)
            s1 = self._site_param(S, s, arc.p1)
            t = (x0 - s0) / (s1 - s0) if s1 != s0 else 0.0
        else:
            p = S.point(s)
            dx, dy = q[0] - p[0], q[1] - p[1]
            h = math.hypot(dx, dy)
            wx, wy = dx / h, dy / h
            other = arc.sites[0] if arc.sites[1] == s else arc.sites[1]
            if other < S.n:
                nx, ny = S.Nl[other]
                hp = S.Nl[other][0] * p[0] + S.Nl[other][1] * p[1] + S.Cl[other]
                rho = hp / (1.0 - (nx * wx + ny * wy))
                x = (p[0] + rho * wx, p[1] + rho * wy)
                e = other
                o = S.vl[e]
                sx = (x[0] - o[0]) * S.Ul[e][0] + (x[1] - o[1]) * S.Ul[e][1]
                f = arc.frame
                t = (sx - f[6]) / (f[7] - f[6]) if f[7] != f[6] else 0.0
            else:
                p2 = S.point(other)
                den = 2.0 * (wx * (p2[0] - p[0]) + wy * (p2[1] - p[1]))
                rho = ((p2[0] - p[0]) ** 2 + (p2[1] - p[1]) ** 2) / den
                x = (p[0] + rho * wx, p[1] + rho * wy)
                dxa, dya = arc.p1[0] - arc.p0[0], arc.p1[1] - arc.p0[1]
                ll = dxa * dxa + dya * dya
                t = ((x[0] - arc.p0[0]) * dxa + (x[1] - arc.p0[1]) * dya) / ll if ll else 0.0
        t = min(max(t, 0.0), 1.0)
        return AxisLocation(arc.id, t, arc.point(t))

    def _edge_of(self, arc: Arc) -> int:
        n = self.sites.n
        return arc.sites[0] if arc.sites[0] < n else arc.sites[1]

    def climb(self, loc: AxisLocation, q, stop: Optional[int] = None) -> Circle:
        """Largest MEC containing q on the peakward path from loc (to ``stop`` if given)."""
        arc = self.arcs[loc.arc]
        if not self._contains_at(arc, loc.t, q):
            raise PreconditionViolated(f"MEC at the start point does not contain {tuple(q)}")
        v = arc.v
        if stop is not None and self.depth[stop] > self.depth[v]:
            stop = None
        if not self.node_contains(v, q):
            return self._bisect(arc, loc.t, q)
        w = v
        floor = self.depth[stop] if stop is not None else 0
        for k in range(len(self.lift) - 1, -1, -1):
            a = self.lift[k][w]
            if a != w and self.depth[a] >= floor and self.node_contains(a, q):
                w = a
        if self.parent[w] == -1 or (stop is not None and w == stop):
            return self.node_circle(w)
        return self._bisect(self.arcs[self.parent_arc[w]], 0.0, q)

    def _contains_at(self, arc: Arc, t: float, q) -> bool:
        x = arc.point(t)
        return math.hypot(x[0] - q[0], x[1] - q[1]) <= arc.radius(t) + self.tol

    def _bisect(self, arc: Arc, lo: float, q) -> Circle:
        hi = 1.0
        for _ in range(BISECT_STEPS):
            m = 0.5 * (lo + hi)
            x = arc.point(m)
            if math.hypot(x[0] - q[0], x[1] - q[1]) <= arc.radius(m):
                lo = m
            else:
                hi = m
        return arc.circle(lo)

    # --- tree helpers ---------------------------------------------------------------
    def neighbors(self, x: int):
        for k in self.adj[x]:
            a = self.arcs[k]
            yield (a.v if a.u == x else a.u), k

    def node_count(self) -> int:
        return len(self.pos)


# --- centroid decomposition ------------------------------------------------------------


def centroid_of_subtree(adj, nodes) -> int:
    """Node whose removal leaves components of at most half the subtree's size.

    ``adj(x)`` yields neighbours of x; only neighbours inside ``nodes`` count.
    """
    nodes = set(nodes)
    start = next(iter(nodes))
    order, par = [start], {start: None}
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for w in adj(x):
            if w in nodes and w not in par:
                par[w] = x
                order.append(w)
    size = {}
    for x in reversed(order):
        size[x] = 1 + sum(size[w] for w in adj(x) if w in nodes and par.get(w) == x)
    total = len(order)
    for x in order:
        biggest = total - size[x]
        for w in adj(x):
            if w in nodes and par.get(w) == x:
                biggest = max(biggest, size[w])
        if 2 * biggest <= total:
            return x
    return start


@dataclass
class CentroidNode:
    node: int
    level: int
    parent: Optional[int]
    children: dict  # neighbour axis node -> centroid-tree index of the component holding it
    members: list


class CentroidTree:
    """Recursive centroid decomposition of an axis tree."""

    def __init__(self, axis: MedialAxis):
        self.axis = axis
        N = axis.node_count()
        nbrs = [[w for w, _ in axis.neighbors(x)] for x in range(N)]
        self.nodes: list = []
        self.level_of = [0] * N
        self.index_of = [0] * N
        removed = [False] * N
        stack = [(list(range(N)), None, 0, None)]
        while stack:
            comp, parent, level, via = stack.pop()
            compset = set(comp)
            c = centroid_of_subtree(lambda x: nbrs[x], compset)
            idx = len(self.nodes)
            self.nodes.append(CentroidNode(c, level, parent, {}, comp))
            if parent is not None:
                self.nodes[parent].children[via] = idx
            self.level_of[c] = level
            self.index_of[c] = idx
            removed[c] = True
            for w in nbrs[c]:
                if removed[w] or w not in compset:
                    continue
                part, seen = [], {w}
                dq = [w]
                while dq:
                    x = dq.pop()
                    part.append(x)
                    for y in nbrs[x]:
                        if y not in seen and not removed[y] and y in compset:
                            seen.add(y)
                            dq.append(y)
                stack.append((part, idx, level + 1, w))
        self.depth = 1 + max(n.level for n in self.nodes)

    @property
    def root(self) -> int:
        return 0


class _ConvexLocator:
    """Nearest edge of a convex polygon by descending the axis centroid tree.

    At a centroid the contact spokes cut the polygon into angular sectors, one
    per incident arc; q's sector names the component to descend into.
    """

    def __init__(self, axis: MedialAxis):
        self.axis = axis
        self.ct = CentroidTree(axis)
        S = axis.sites
        self.sectors = {}
        for cn in self.ct.nodes:
            x = cn.node
            p = axis.pos[x]
            if axis.is_leaf[x]:
                # one sector: everything continues through the single arc
                self.sectors[x] = ([0.0], [next(axis.neighbors(x))])
                continue
            spk = sorted((math.atan2(*reversed(S.foot_direction(s, p))), s) for s in axis.contacts[x])
            spokes = [a for a, _ in spk]
            slots = [None] * len(spokes)
            # the sector between the spokes of sites a and b holds the (a, b) arc;
            # arc directions are unreliable when a and b are nearly parallel
            by_pair, rest = {}, []
            for w, k in axis.neighbors(x):
                key = frozenset(axis.arcs[k].sites)
                # a degree-2 node has both arcs on one pair; place those by direction
                if key in by_pair:
                    rest.append((w, k))
                    rest.append(by_pair.pop(key))
                    by_pair[key] = None
                else:
                    by_pair[key] = (w, k)
            for i in range(len(spk)):
                slots[i] = by_pair.pop(frozenset((spk[i][1], spk[(i + 1) % len(spk)][1])), None)
            rest.extend(v for v in by_pair.values() if v is not None)
            for w, k in rest:
                m = axis.arcs[k].point(0.5)
                j = (bisect.bisect_right(spokes, math.atan2(m[1] - p[1], m[0] - p[0])) - 1) % len(spokes)
                if slots[j] is None:
                    slots[j] = (w, k)
            self.sectors[x] = (spokes, slots)

    def site(self, q) -> int:
        axis = self.axis
        ct = self.ct
        ci = ct.root
        while True:
            cn = ct.nodes[ci]
            x = cn.node
            spokes, slots = self.sectors[x]
            p = axis.pos[x]
            ang = math.atan2(q[1] - p[1], q[0] - p[0])
            slot = slots[(bisect.bisect_right(spokes, ang) - 1) % len(spokes)]
            if slot is None:
                return self._nearer(axis.contacts[x], q)
            w, k = slot
            nxt = cn.children.get(w)
            if nxt is None:
                return self._nearer(axis.arcs[k].sites, q)
            ci = nxt

    def _nearer(self, sites, q) -> int:
        S = self.axis.sites
        return min(sites, key=lambda s: S.Nl[s][0] * q[0] + S.Nl[s][1] * q[1] + S.Cl[s])


# --- public operations --------------------------------------------------------------


def build_medial_axis(poly: Polygon, require_distinct: Optional[bool] = None) -> MedialAxis:
    return MedialAxis(poly, require_distinct=require_distinct)


def clearance_on_arc(axis: MedialAxis, arc_id: int, t: float) -> float:
    return axis.clearance_on_arc(arc_id, t)


def locate_nearest_axis_arc(axis: MedialAxis, q):
    loc = axis.locate(q)
    return loc.arc, loc.point


def largest_mec_on_rising_path(axis: MedialAxis, start: AxisLocation, to_peakward_node: Optional[int], q) -> Circle:
    return axis.climb(start, q, stop=to_peakward_node)


def split_into_mountains(axis: MedialAxis) -> list:
    return list(axis.mountains)


def convex_ring_ok(vertices) -> bool:
    """Strictly convex counterclockwise ring that winds exactly once (O(n))."""
    n = len(vertices)
    if n < 3:
        return False
    turn = 0.0
    for i in range(n):
        a, b, c = vertices[i - 1], vertices[i], vertices[(i + 1) % n]
        if orient2d(a, b, c) <= 0:
            return False
        d1 = math.atan2(b[1] - a[1], b[0] - a[0])
        d2 = math.atan2(c[1] - b[1], c[0] - b[0])
        turn += (d2 - d1 + math.pi) % (2 * math.pi) - math.pi
    return abs(turn - 2 * math.pi) < 1e-6
