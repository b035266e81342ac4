"""Largest empty circle containing q inside a convex polygon.

The medial axis of a convex polygon is a single mountain rooted at the
incentre.  A query retracts q onto the axis (the retraction point x has q in
MEC_x) and climbs toward the root while the MECs keep containing q.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from .errors import NotConvex
from .geometry import EPS_GEOM, Location, Polygon, QueryAnswer, orient2d, point_segment_distance
from .medial_axis import MedialAxis, convex_ring_ok


class ConvexInside:
    """O(log n) point classification for a convex ring (fan around vertex 0)."""

    def __init__(self, vertices):
        self.v = [tuple(p) for p in vertices]
        v0 = self.v[0]
        # polar angle of every vertex seen from v0, unwrapped to increase
        base = math.atan2(self.v[1][1] - v0[1], self.v[1][0] - v0[0])
        self.ang = [(math.atan2(p[1] - v0[1], p[0] - v0[0]) - base) % (2 * math.pi) for p in self.v[1:]]
        self.ang[0] = 0.0

    def _near(self, q, edges) -> bool:
        v, n = self.v, len(self.v)
        return any(point_segment_distance(q, v[i % n], v[(i + 1) % n]) <= EPS_GEOM for i in edges)

    def classify(self, q) -> Location:
        v, n = self.v, len(self.v)
        a = (math.atan2(q[1] - v[0][1], q[0] - v[0][0]) - math.atan2(v[1][1] - v[0][1], v[1][0] - v[0][0])) % (
            2 * math.pi
        )
        if a > math.pi:
            a -= 2 * math.pi
        k = bisect.bisect_right(self.ang, a) - 1
        k = min(max(k, 0), n - 3)
        i = k + 1  # wedge v0, v_i, v_{i+1}
        if self._near(q, (0, n - 1, i - 1, i, i + 1)):
            return Location.ON_BOUNDARY
        if orient2d(v[0], v[1], q) < 0 or orient2d(v[n - 1], v[0], q) < 0:
            return Location.OUTSIDE
        if orient2d(v[0], v[i], q) < 0 or orient2d(v[0], v[i + 1], q) > 0:
            # angular rounding put q in the wrong wedge; settle it linearly
            return _slow_classify(v, q)
        return Location.INSIDE if orient2d(v[i], v[i + 1], q) > 0 else Location.OUTSIDE


def _slow_classify(v, q) -> Location:
    from .geometry import point_in_polygon

    return point_in_polygon(Polygon(v, validate=False), q)


@dataclass
class ConvexQmecIndex:
    polygon: Polygon
    axis: MedialAxis
    inside: ConvexInside

    @property
    def root(self) -> int:
        return self.axis.root

    @property
    def cell_count(self) -> int:
        return len(self.polygon)


def preprocess_convex(poly) -> ConvexQmecIndex:
    if not isinstance(poly, Polygon):
        poly = Polygon(poly, validate=False)
    if not convex_ring_ok(poly.vertices):
        raise NotConvex("polygon is not strictly convex")
    axis = MedialAxis(poly)
    return ConvexQmecIndex(poly, axis, ConvexInside(poly.vertices))


def query_convex(idx: ConvexQmecIndex, q) -> QueryAnswer:
    if idx.inside.classify(q) is not Location.INSIDE:
        return QueryAnswer.unbounded()
    loc = idx.axis.locate(q, checked=True)
    return QueryAnswer.bounded(idx.axis.climb(loc, q), witness=loc.arc)
