"""Random and constructed inputs shared by tests, self-test and benchmarks."""
from __future__ import annotations

import math

import numpy as np

from .geometry import AxisRect, Polygon


def random_convex(n: int, rng: np.random.Generator, scale: float = 10.0) -> Polygon:
    """Convex polygon with exactly n vertices on a perturbed ellipse."""
    while True:
        # one angle per stratum keeps gaps bounded away from 0 and from pi
        ang = (np.arange(n) + rng.uniform(0.1, 0.9, n)) * (2.0 * math.pi / n)
        a, b = scale * rng.uniform(0.5, 1.0), scale * rng.uniform(0.5, 1.0)
        rot = rng.uniform(0.0, math.pi)
        x, y = a * np.cos(ang), b * np.sin(ang)
        c, s = math.cos(rot), math.sin(rot)
        pts = np.column_stack([c * x - s * y, s * x + c * y]) + scale
        poly = Polygon(pts.tolist(), validate=False)
        if poly.is_convex():
            return poly


def regular_polygon(n: int, side: float = 1.0) -> Polygon:
    R = side / (2.0 * math.sin(math.pi / n))
    return Polygon([(R * math.cos(2 * math.pi * k / n), R * math.sin(2 * math.pi * k / n)) for k in range(n)])


def random_simple(n: int, rng: np.random.Generator, scale: float = 10.0, spike: float = 0.6) -> Polygon:
    """Star-shaped simple polygon; ``spike`` sets how far radii may dip (reflexivity)."""
    while True:
        ang = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2.0 * math.pi]]))
        if gaps.max() >= math.pi * 0.8 or gaps.min() < 2e-2:
            continue
        rad = scale * rng.uniform(1.0 - spike, 1.0, n)
        pts = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)]) + scale
        try:
            return Polygon(pts.tolist())
        except ValueError:
            continue


def dumbbell(width: float = 4.0, corridor: float = 1.0, length: float = 3.0, skew: float = 0.0) -> Polygon:
    """Two rooms joined by a thin corridor; ``skew`` enlarges the right room.

    One wall of each room is tilted so that no clearance plateau appears.
    """
    w, c, L = width, corridor, length
    w2 = w + skew
    h = 0.5 * c
    return Polygon([
        (0.0, -0.5 * w), (w, -0.5 * w), (w, -h + 0.013), (w + L, -h), (w + L, -0.5 * w2),
        (w + L + w2, -0.5 * w2 - 0.17), (w + L + w2, 0.5 * w2), (w + L, 0.5 * w2), (w + L, h),
        (w, h + 0.021), (w, 0.5 * w), (0.0, 0.5 * w + 0.23),
    ])


def star(lobes: int = 5, outer: float = 5.0, inner: float = 2.0, twist: float = 0.037) -> Polygon:
    """Star with ``lobes`` points; a small twist keeps node clearances distinct."""
    pts = []
    for k in range(2 * lobes):
        r = outer * (1.0 + 0.02 * k) if k % 2 == 0 else inner
        a = math.pi * k / lobes + (twist * k if k % 2 else 0.0)
        pts.append((r * math.cos(a), r * math.sin(a)))
    return Polygon(pts)


def flower(lobes: int = 5, inner: float = 0.6, outer: float = 4.0, half: float = 0.4) -> Polygon:
    """Petals widening away from a small core: every petal is its own mountain.

    ``half`` is each petal's half-opening as a fraction of the angular step.
    Sizes and angles drift a little from petal to petal to keep clearances
    distinct.
    """
    pts = []
    step = 2.0 * math.pi / lobes
    for k in range(lobes):
        a = step * k + 0.013 * k
        s = 1.0 + 0.05 * k
        h = half * step * (1.0 + 0.02 * k)
        ri = inner * (1.0 + 0.01 * k)
        pts.append((ri * math.cos(a - 0.5 * step), ri * math.sin(a - 0.5 * step)))
        for ang, r in ((a - h, outer * s), (a + 0.07, 1.12 * outer * s), (a + h, 0.97 * outer * s)):
            pts.append((r * math.cos(ang), r * math.sin(ang)))
    return Polygon(pts)


def l_shape() -> Polygon:
    return Polygon([(0, 0), (3, 0), (3, 1.2), (1, 1), (1.1, 2.5), (0, 2.2)])


def random_points(n: int, rng: np.random.Generator, scale: float = 10.0) -> list:
    return [tuple(p) for p in rng.uniform(0.0, scale, (n, 2)).tolist()]


def random_region_points(n: int, rng: np.random.Generator, region: AxisRect = None):
    region = region or AxisRect(0.0, 1.0, 0.0, 1.0)
    xs = rng.uniform(region.xmin, region.xmax, n)
    ys = rng.uniform(region.ymin, region.ymax, n)
    return [(float(x), float(y)) for x, y in zip(xs, ys)], region


def sample_inside(poly: Polygon, k: int, rng: np.random.Generator) -> list:
    from . import kernels

    x0, x1, y0, y1 = poly.bbox()
    ring = np.array(poly.vertices, dtype=float)
    out = []
    while len(out) < k:
        x = rng.uniform(x0, x1, 4 * k)
        y = rng.uniform(y0, y1, 4 * k)
        ok = kernels.inside_polygon(x, y, ring)
        out.extend(zip(x[ok].tolist(), y[ok].tolist()))
    return out[:k]


def random_circles(n: int, rng: np.random.Generator, scale: float = 10.0) -> list:
    from .geometry import Circle, Point

    c = rng.uniform(0.0, scale, (n, 2))
    r = rng.uniform(0.05, 0.35, n) * scale
    return [Circle(Point(float(x), float(y)), float(s)) for (x, y), s in zip(c, r)]


def multi_mountain() -> list:
    """Constructed polygons whose medial axes have several peaks."""
    return [
        ("dumbbell", dumbbell()),
        ("dumbbell-skew", dumbbell(skew=1.5)),
        ("flower5", flower(5)),
        ("flower7", flower(7, inner=0.9, outer=5.0)),
        ("l-shape", l_shape()),
    ]
