"""Largest empty circle containing q inside a simple polygon.

The medial axis is cut into mountains (single-peak subtrees) and decomposed
by centroids.  A query walks the centroid tree along the component that holds
q's retraction point on the axis.  At the first centroid v whose MEC contains
q, the guiding circles of v (records of the clearance along paths leaving v,
restricted to radii of v's subtree and to circles overlapping MEC_v) select
the mountains to climb.  If no centroid MEC contains q, the answer lies on the
arc of the retraction point itself.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import PreconditionViolated
from .geometry import Circle, Location, Point, Polygon, QueryAnswer, point_in_polygon
from .lcq import CircleSet, LcqTree
from .medial_axis import AxisLocation, CentroidTree, MedialAxis, Mountain


@dataclass
class GuidingCircle:
    circle: Circle
    arc: int
    t: float
    node: Optional[int]
    mountains: tuple


@dataclass
class GuidingSet:
    v: int
    radii: list
    circles: list
    by_radius: dict
    lcq: Optional[LcqTree]

    @property
    def max_per_radius(self) -> int:
        return max((len(g) for g in self.by_radius.values()), default=0)


@dataclass
class SimpleQmecIndex:
    polygon: Polygon
    axis: MedialAxis
    tree: CentroidTree
    guides: list
    tags: list  # per axis arc: centroid-tree indices below the root, in descent order
    stats: dict = field(default_factory=dict)

    @property
    def mountains(self) -> list:
        return self.axis.mountains


def _start_points(axis: MedialAxis, g: GuidingCircle):
    """Axis locations from which climbing covers every mountain at g's centre."""
    if g.node is None:
        return [AxisLocation(g.arc, g.t, axis.arcs[g.arc].point(g.t))]
    x = g.node
    rising = [k for k in axis.adj[x] if axis.arcs[k].u == x]
    if not rising:
        k = axis.adj[x][0]
        return [AxisLocation(k, 1.0, axis.pos[x])]
    return [AxisLocation(k, 0.0, axis.pos[x]) for k in rising]


def _node_mountains(axis: MedialAxis, x: int) -> tuple:
    return tuple(sorted({axis.mountain_of_arc[k] for k in axis.adj[x]}))


def build_guiding_set(axis: MedialAxis, v: int, members) -> GuidingSet:
    """Guiding circles of centroid v over its component ``members``."""
    members = set(members)
    rad, pos = axis.radius, axis.pos
    R = sorted({rad[x] for x in members if not axis.is_leaf[x]} | {rad[v]})
    rv, pv = rad[v], pos[v]
    tol = axis.tol
    out = [GuidingCircle(axis.node_circle(v), axis.adj[v][0], 0.0, v, _node_mountains(axis, v))]
    stack = [(v, -1, rv)]
    while stack:
        x, came, m = stack.pop()
        for w, k in axis.neighbors(x):
            if w == came:
                continue
            # an arc into an earlier centroid still belongs here, minus its far end
            inside = w in members
            arc = axis.arcs[k]
            m2 = m
            if arc.u == x and rad[w] >= m:
                # equal-to-max radii count: after a dip the path returns to them
                lo = bisect.bisect_left(R, m) if m > rad[x] else bisect.bisect_right(R, rad[x])
                hi = bisect.bisect_right(R, rad[w]) if inside else bisect.bisect_left(R, rad[w])
                for rho in R[lo:hi]:
                    if rho == rad[w]:
                        t, node, c = 1.0, w, pos[w]
                    else:
                        t, node = arc.t_at_radius(rho), None
                        c = arc.point(t)
                    if math.hypot(c[0] - pv[0], c[1] - pv[1]) <= rho + rv + tol:
                        mts = _node_mountains(axis, w) if node is not None else (arc.mountain,)
                        out.append(GuidingCircle(Circle(Point(*c), rho), k, t, node, mts))
                m2 = rad[w]
            if inside and math.hypot(pos[w][0] - pv[0], pos[w][1] - pv[1]) <= rad[w] + rv + tol:
                stack.append((w, x, m2))
    by_radius: dict = {}
    for i, g in enumerate(out):
        by_radius.setdefault(g.circle.radius, []).append(i)
    cs = CircleSet([g.circle for g in out], validate=False)
    return GuidingSet(v, R, out, by_radius, LcqTree(cs))


def _arc_tags(axis: MedialAxis, tree: CentroidTree) -> list:
    """For every arc, the centroid-tree nodes whose component holds the arc, top-down."""
    where = []
    for cn in tree.nodes:
        w = {}
        for via, ch in cn.children.items():
            for y in tree.nodes[ch].members:
                w[y] = ch
        where.append(w)
    tags = []
    for arc in axis.arcs:
        a, b = arc.u, arc.v
        path, ci = [], tree.root
        while True:
            c = tree.nodes[ci].node
            if c == a or c == b:
                o = b if c == a else a
                nxt = tree.nodes[ci].children.get(o)
            else:
                nxt = where[ci].get(a)
            if nxt is None:
                break
            path.append(nxt)
            ci = nxt
        tags.append(path)
    return tags


def preprocess_simple(poly) -> SimpleQmecIndex:
    if not isinstance(poly, Polygon):
        poly = Polygon(poly)
    axis = MedialAxis(poly, require_distinct=True)
    tree = CentroidTree(axis)
    guides = [build_guiding_set(axis, cn.node, cn.members) for cn in tree.nodes]
    idx = SimpleQmecIndex(poly, axis, tree, guides, _arc_tags(axis, tree))
    idx.stats = {
        "mountains": len(axis.mountains),
        "tree_depth": tree.depth,
        "max_guides_per_radius": max(g.max_per_radius for g in guides),
        "max_tag": max((len(t) for t in idx.tags), default=0),
    }
    return idx


def mim_query(axis: MedialAxis, mountain: Mountain, entry: AxisLocation, q) -> Circle:
    """Largest MEC containing q centred on ``mountain``, climbing from ``entry``."""
    if axis.mountain_of_arc[entry.arc] != mountain.id:
        raise PreconditionViolated(f"entry arc {entry.arc} is not on mountain {mountain.id}")
    return axis.climb(entry, q)


def qic_query(idx: SimpleQmecIndex, ci: int, q, trace: Optional[dict] = None) -> Circle:
    """Answer for q inside the MEC of centroid ``ci`` via its guiding circles."""
    axis = idx.axis
    gs = idx.guides[ci]
    if not axis.node_contains(gs.v, q):
        raise PreconditionViolated(f"q={tuple(q)} is not inside the MEC of axis node {gs.v}")
    top = gs.lcq.query(q)
    # q may sit on MEC_v within the axis tolerance but outside EPS_GEOM
    top_circle = top.circle if top.circle is not None else axis.node_circle(gs.v)
    rho = top_circle.radius
    sq = [gs.circles[i] for i in gs.by_radius[rho]
          if math.hypot(gs.circles[i].circle.center[0] - q[0], gs.circles[i].circle.center[1] - q[1])
          <= rho + axis.tol]
    if trace is not None:
        trace["S_q"] = len(sq)
        trace["mountains"] = sorted({m for g in sq for m in g.mountains})
    best = top_circle
    for g in sq:
        for start in _start_points(axis, g):
            try:
                c = axis.climb(start, q)
            except PreconditionViolated:
                continue
            if c.radius > best.radius:
                best = c
    return best


def query_simple(idx: SimpleQmecIndex, q, trace: Optional[dict] = None) -> QueryAnswer:
    if point_in_polygon(idx.polygon, q) is not Location.INSIDE:
        return QueryAnswer.unbounded()
    axis, tree = idx.axis, idx.tree
    loc = axis.locate(q, checked=True)
    tag = idx.tags[loc.arc]
    ci, level = tree.root, 0
    while True:
        if axis.node_contains(tree.nodes[ci].node, q):
            if trace is not None:
                trace["centroid"] = ci
            return QueryAnswer.bounded(qic_query(idx, ci, q, trace), witness=ci)
        if level >= len(tag):
            break
        ci = tag[level]
        level += 1
    if trace is not None:
        trace["centroid"] = None
    m = axis.mountains[axis.mountain_of_arc[loc.arc]]
    return QueryAnswer.bounded(mim_query(axis, m, loc, q), witness=None)
