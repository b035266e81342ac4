"""Planar primitives and predicates used by every index.

Coordinates are plain floats.  Orientation and in-circle tests are evaluated
adaptively: a float filter first, exact rational arithmetic when the filter
cannot certify the sign.  Everything else uses the absolute tolerance
``EPS_GEOM`` (overridable through the ``ESQ_EPS`` environment variable, for
testing only).
"""
from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .errors import (
    CollinearInput,
    DegenerateInput,
    IdenticalCircles,
    NotSimple,
    OutsidePolygon,
)

EPS_GEOM = float(os.environ.get("ESQ_EPS", "1e-9"))

_EPS_MACH = 2.0 ** -53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPS_MACH) * _EPS_MACH
_ICC_ERRBOUND = (10.0 + 96.0 * _EPS_MACH) * _EPS_MACH


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius >= 0.0:
            raise ValueError(f"negative radius {self.radius}")
        if not isinstance(self.center, Point):
            object.__setattr__(self, "center", Point(*self.center))

    @property
    def area(self) -> float:
        return math.pi * self.radius * self.radius

    def isclose(self, other: "Circle", tol: float = None) -> bool:
        tol = EPS_GEOM if tol is None else tol
        return (
            abs(self.center.x - other.center.x) <= tol
            and abs(self.center.y - other.center.y) <= tol
            and abs(self.radius - other.radius) <= tol
        )


@dataclass(frozen=True)
class AxisRect:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError(f"empty rectangle {self}")

    @property
    def area(self) -> float:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    def contains(self, p, strict: bool = False) -> bool:
        x, y = p
        if strict:
            return self.xmin < x < self.xmax and self.ymin < y < self.ymax
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax

    def as_tuple(self):
        return (self.xmin, self.xmax, self.ymin, self.ymax)


class AnswerKind(enum.Enum):
    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"
    RECTANGLE = "rectangle"
    NULL = "null"


@dataclass(frozen=True)
class QueryAnswer:
    kind: AnswerKind
    circle: Optional[Circle] = None
    rect: Optional[AxisRect] = None
    witness: object = None

    def __post_init__(self):
        if self.kind is AnswerKind.BOUNDED and (self.circle is None or self.rect is not None):
            raise ValueError("bounded answer needs exactly a circle")
        if self.kind is AnswerKind.RECTANGLE and (self.rect is None or self.circle is not None):
            raise ValueError("rectangle answer needs exactly a rectangle")
        if self.kind in (AnswerKind.UNBOUNDED, AnswerKind.NULL) and (
            self.circle is not None or self.rect is not None
        ):
            raise ValueError(f"{self.kind.value} answer carries no payload")

    @classmethod
    def bounded(cls, circle: Circle, witness=None) -> "QueryAnswer":
        return cls(AnswerKind.BOUNDED, circle=circle, witness=witness)

    @classmethod
    def unbounded(cls) -> "QueryAnswer":
        return cls(AnswerKind.UNBOUNDED)

    @classmethod
    def null(cls) -> "QueryAnswer":
        return cls(AnswerKind.NULL)

    @classmethod
    def rectangle(cls, rect: AxisRect, witness=None) -> "QueryAnswer":
        return cls(AnswerKind.RECTANGLE, rect=rect, witness=witness)

    @property
    def radius(self) -> float:
        if self.kind is AnswerKind.UNBOUNDED:
            return math.inf
        if self.kind is AnswerKind.BOUNDED:
            return self.circle.radius
        return 0.0


class Location(enum.Enum):
    INSIDE = "inside"
    ON_BOUNDARY = "on_boundary"
    OUTSIDE = "outside"


# --- exact-filtered predicates ---------------------------------------------

def orient2d(a, b, c) -> float:
    """Twice the signed area of (a, b, c); positive when counterclockwise.

    The float value is returned whenever its sign is certified, otherwise the
    exact value (as a float with the correct sign) is returned.
    """
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    bound = _CCW_ERRBOUND * (abs(detleft) + abs(detright))
    if det > bound or -det > bound:
        return det
    fa = [Fraction(v) for v in (a[0], a[1], b[0], b[1], c[0], c[1])]
    ax, ay, bx, by, cx, cy = fa
    exact = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
    return float(exact) if exact != 0 or det == 0 else 0.0


def incircle(a, b, c, d) -> float:
    """Positive when d lies inside the circle through counterclockwise a, b, c."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    t1 = bdx * cdy - cdx * bdy
    t2 = cdx * ady - adx * cdy
    t3 = adx * bdy - bdx * ady
    det = alift * t1 + blift * t2 + clift * t3
    perm = (
        (abs(bdx * cdy) + abs(cdx * bdy)) * alift
        + (abs(cdx * ady) + abs(adx * cdy)) * blift
        + (abs(adx * bdy) + abs(bdx * ady)) * clift
    )
    if det > _ICC_ERRBOUND * perm or -det > _ICC_ERRBOUND * perm:
        return det
    A = [Fraction(v) for v in (a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1])]
    ax, ay, bx, by, cx, cy, dx, dy = A
    adx, ady, bdx, bdy, cdx, cdy = ax - dx, ay - dy, bx - dx, by - dy, cx - dx, cy - dy
    exact = (
        (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
        + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
        + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
    )
    if exact == 0:
        return 0.0
    return float(exact) if float(exact) != 0.0 else math.copysign(1e-300, exact)


# --- distances -------------------------------------------------------------

def dist(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def segment_closest(p, a, b):
    """Closest point of segment ab to p and its parameter in [0, 1]."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    den = dx * dx + dy * dy
    if den == 0.0:
        return Point(a[0], a[1]), 0.0
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / den
    t = 0.0 if t < 0.0 else 1.0 if t > 1.0 else t
    return Point(a[0] + t * dx, a[1] + t * dy), t


def point_segment_distance(p, a, b) -> float:
    c, _ = segment_closest(p, a, b)
    return math.hypot(p[0] - c[0], p[1] - c[1])


# --- circles ---------------------------------------------------------------

def circle_contains(c: Circle, p, eps: float = None) -> bool:
    """Closed-disk containment: boundary contact counts."""
    eps = EPS_GEOM if eps is None else eps
    return math.hypot(p[0] - c.center[0], p[1] - c.center[1]) <= c.radius + eps


def circumcircle(a, b, c) -> Circle:
    det = orient2d(a, b, c)
    if abs(det) < EPS_GEOM:
        raise CollinearInput(f"collinear points {a}, {b}, {c}")
    bx, by = b[0] - a[0], b[1] - a[1]
    cx, cy = c[0] - a[0], c[1] - a[1]
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    center = Point(a[0] + ux, a[1] + uy)
    r = (math.hypot(ux, uy) + dist(center, b) + dist(center, c)) / 3.0
    return Circle(center, r)


def circle_circle_intersections(c1: Circle, c2: Circle) -> list:
    (x1, y1), r1 = c1.center, c1.radius
    (x2, y2), r2 = c2.center, c2.radius
    dx, dy = x2 - x1, y2 - y1
    d = math.hypot(dx, dy)
    if d <= EPS_GEOM and abs(r1 - r2) <= EPS_GEOM:
        raise IdenticalCircles(f"identical circles {c1} and {c2}")
    if d <= EPS_GEOM:
        return []
    if d > r1 + r2 + EPS_GEOM or d < abs(r1 - r2) - EPS_GEOM:
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
    h2 = r1 * r1 - a * a
    ux, uy = dx / d, dy / d
    mx, my = x1 + a * ux, y1 + a * uy
    if abs(d - (r1 + r2)) <= EPS_GEOM or abs(d - abs(r1 - r2)) <= EPS_GEOM or h2 <= 0.0:
        return [Point(mx, my)]
    h = math.sqrt(h2)
    return [Point(mx - h * uy, my + h * ux), Point(mx + h * uy, my - h * ux)]


# --- polygons --------------------------------------------------------------

def signed_area(pts) -> float:
    s = 0.0
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return 0.5 * s


def _segments_cross(a, b, c, d) -> bool:
    """True if closed segments ab and cd share any point."""
    o1, o2 = orient2d(a, b, c), orient2d(a, b, d)
    o3, o4 = orient2d(c, d, a), orient2d(c, d, b)
    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
        return True

    def on_seg(p, q, r):
        return (
            min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])
        )

    return (
        (o1 == 0 and on_seg(a, b, c))
        or (o2 == 0 and on_seg(a, b, d))
        or (o3 == 0 and on_seg(c, d, a))
        or (o4 == 0 and on_seg(c, d, b))
    )


class Polygon:
    """Simple polygon with a counterclockwise vertex ring.

    Clockwise input is reversed on construction.  ``validate`` checks the
    ring for repeated vertices and self-intersections.
    """

    def __init__(self, vertices: Sequence, validate: bool = True):
        pts = [Point(float(x), float(y)) for x, y in vertices]
        if len(pts) < 3:
            raise DegenerateInput("polygon needs at least 3 vertices")
        if signed_area(pts) < 0:
            pts.reverse()
        self.vertices = tuple(pts)
        if validate:
            self._validate()

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __repr__(self):
        return f"Polygon({[tuple(p) for p in self.vertices]})"

    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def _validate(self):
        n = len(self.vertices)
        for i in range(n):
            if dist(self.vertices[i], self.vertices[(i + 1) % n]) <= EPS_GEOM:
                raise DegenerateInput(f"repeated vertex at index {i}")
        if abs(signed_area(self.vertices)) <= EPS_GEOM:
            raise DegenerateInput("polygon has zero area")
        edges = self.edges()
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    a, b = edges[i]
                    c, d = edges[j]
                    # adjacent edges may only share their common endpoint
                    shared = b if j == i + 1 else a
                    other = d if j == i + 1 else c
                    far = a if j == i + 1 else b
                    if orient2d(far, shared, other) == 0 and (
                        (other[0] - shared[0]) * (far[0] - shared[0])
                        + (other[1] - shared[1]) * (far[1] - shared[1])
                    ) > 0:
                        raise NotSimple(f"edges {i} and {j} overlap")
                    continue
                if _segments_cross(*edges[i], *edges[j]):
                    raise NotSimple(f"edges {i} and {j} intersect")

    def is_convex(self) -> bool:
        n = len(self.vertices)
        v = self.vertices
        return all(orient2d(v[i - 1], v[i], v[(i + 1) % n]) > 0 for i in range(n))

    def reflex_vertices(self) -> list:
        n = len(self.vertices)
        v = self.vertices
        return [i for i in range(n) if orient2d(v[i - 1], v[i], v[(i + 1) % n]) < 0]

    def bbox(self):
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)

    def diameter(self) -> float:
        x0, x1, y0, y1 = self.bbox()
        return math.hypot(x1 - x0, y1 - y0)


def point_in_polygon(poly: Polygon, p) -> Location:
    x, y = p
    verts = poly.vertices
    n = len(verts)
    inside = False
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if point_segment_distance(p, a, b) <= EPS_GEOM:
            return Location.ON_BOUNDARY
        if (a[1] > y) != (b[1] > y):
            xi = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if x < xi:
                inside = not inside
    return Location.INSIDE if inside else Location.OUTSIDE


def boundary_distance(poly: Polygon, p) -> float:
    """Distance from p to the polygon boundary, wherever p is."""
    return min(point_segment_distance(p, a, b) for a, b in poly.edges())


def clearance(poly: Polygon, p) -> float:
    """Radius of the largest empty circle centered at an interior point p."""
    if point_in_polygon(poly, p) is not Location.INSIDE:
        raise OutsidePolygon(f"{tuple(p)} is not strictly inside the polygon")
    return boundary_distance(poly, p)


def convex_hull(points) -> Polygon:
    """Counterclockwise hull without collinear boundary points."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) < 3:
        raise DegenerateInput("convex hull needs at least 3 distinct points")

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orient2d(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    ring = lower[:-1] + upper[:-1]
    if len(ring) < 3:
        raise DegenerateInput("all points are collinear")
    return Polygon(ring, validate=False)
