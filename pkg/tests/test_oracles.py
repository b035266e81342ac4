import math

import numpy as np
import pytest

from esq import instances as inst
from esq.errors import OutsidePolygon
from esq.geometry import AnswerKind, AxisRect, Circle, Point, Polygon, circumcircle, clearance, convex_hull
from esq.oracles import (
    SimpleOracle,
    oracle_lcq,
    oracle_mers,
    oracle_qmec_convex,
    oracle_qmec_points,
    oracle_qmec_simple,
    oracle_qmer,
)

SQUARE = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
JSQUARE = [(0.0, 0.0), (1.0000001, 0.0), (1.0, 1.0000002), (0.0, 0.9999999)]


def test_lcq_examples():
    assert oracle_lcq([], (0, 0)).kind is AnswerKind.NULL
    one = [Circle(Point(0, 0), 1.0)]
    assert oracle_lcq(one, (0.5, 0)).witness == 0
    nested = [Circle(Point(0, 0), 1.0), Circle(Point(0.2, 0), 3.0), Circle(Point(5, 5), 9.0)]
    assert oracle_lcq(nested[:2], (0.1, 0)).witness == 1


def test_points_examples():
    tri = [(0, 0), (4, 0), (1, 3)]
    assert oracle_qmec_points(tri, (9, 9)).kind is AnswerKind.UNBOUNDED
    # q at the circumcentre (2, 1): the circumcircle (radius sqrt 5) competes with
    # circles through two sites and q, and the one through (0,0), (1,3) wins
    a = oracle_qmec_points(tri, (2, 1))
    pinned = max(circumcircle(tri[i], tri[j], (2, 1)).radius for i, j in ((0, 1), (0, 2), (1, 2)))
    assert a.radius == pytest.approx(pinned, rel=1e-12)
    assert a.radius == pytest.approx(5 / math.sqrt(2), rel=1e-12) and a.radius > math.sqrt(5)
    eq = [(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)]
    assert oracle_qmec_points(eq, (0.5, math.sqrt(3) / 6)).radius == pytest.approx(1 / math.sqrt(3), rel=1e-12)
    assert oracle_qmec_points(JSQUARE, (0.5, 0.5)).radius == pytest.approx(math.sqrt(0.5), abs=1e-6)


def _grid_best(P, q, m=241):
    """Largest empty circle holding q over a grid of centres, polished by pattern search."""
    P = np.asarray(P)
    lo, hi = P.min(axis=0), P.max(axis=0)
    span = hi - lo
    X, Y = np.meshgrid(np.linspace(lo[0] - span[0], hi[0] + span[0], m),
                       np.linspace(lo[1] - span[1], hi[1] + span[1], m))
    C = np.column_stack([X.ravel(), Y.ravel()])

    def score(C):
        r = np.hypot(C[:, None, 0] - P[None, :, 0], C[:, None, 1] - P[None, :, 1]).min(axis=1)
        return np.where(np.hypot(C[:, 0] - q[0], C[:, 1] - q[1]) <= r, r, -1.0)

    s = score(C)
    best = float(s.max())
    h = 3 * span.max() / m
    dirs = np.array([[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [1, -1], [-1, 1], [-1, -1]], float)
    for k in np.argsort(-s)[:10]:
        c, v = C[k].copy(), s[k]
        step = h
        while step > 1e-10:
            T = c + step * dirs
            t = score(T)
            j = int(np.argmax(t))
            if t[j] > v:
                c, v = T[j], t[j]
            else:
                step *= 0.5
        best = max(best, float(v))
    return best


def test_points_candidates_complete():
    rng = np.random.default_rng(11)
    for _ in range(5):
        P = inst.random_points(int(rng.integers(4, 9)), rng)
        for q in inst.sample_inside(convex_hull(P), 4, rng):
            o = oracle_qmec_points(P, q).radius
            g = _grid_best(P, q)
            assert g <= o + 1e-6
            assert g >= o * (1 - 1e-3)


def test_convex_examples():
    assert oracle_qmec_convex(SQUARE, (0.5, 0.5)).radius == pytest.approx(0.5, rel=1e-12)
    assert oracle_qmec_convex(SQUARE, (0.1, 0.1)).radius == pytest.approx(0.1 * (2 + math.sqrt(2)), rel=1e-12)
    assert oracle_qmec_convex(SQUARE, (3, 3)).kind is AnswerKind.UNBOUNDED
    tri = Polygon([(0, 0), (3, 0), (0, 4)])
    # 3-4-5 right triangle: incentre (1, 1), inradius 1
    a = oracle_qmec_convex(tri, (1, 1))
    assert a.radius == pytest.approx(1.0, rel=1e-12)
    assert (a.circle.center.x, a.circle.center.y) == pytest.approx((1, 1), abs=1e-12)


def test_simple_oracle_agrees_with_convex():
    rng = np.random.default_rng(12)
    for _ in range(4):
        poly = inst.random_convex(int(rng.integers(4, 12)), rng)
        so = SimpleOracle(poly)
        for q in inst.sample_inside(poly, 5, rng):
            assert so.query(q).radius == pytest.approx(oracle_qmec_convex(poly, q).radius, rel=1e-4)


def test_simple_oracle_dumbbell_rooms():
    poly = inst.dumbbell(skew=1.5)
    so = SimpleOracle(poly)
    V = np.array(poly.vertices)
    x0 = V[:, 0].min()
    left = so.query((x0 + 0.3, 0.0))
    # clearance of its centre equals its radius and it stays in the left room
    assert abs(clearance(poly, left.circle.center) - left.radius) <= 1e-6
    assert left.circle.center.x < 0.5 * (V[:, 0].min() + V[:, 0].max())


def test_simple_oracle_at_peak():
    poly = inst.regular_polygon(7, 2.0)
    so = SimpleOracle(poly)
    c = np.array(poly.vertices).mean(axis=0)
    assert so.query(tuple(c)).radius == pytest.approx(clearance(poly, tuple(c)), rel=1e-6)
    with pytest.raises(OutsidePolygon):
        oracle_qmec_simple(poly, (100, 100), so)


def test_qmer_examples():
    unit = AxisRect(0, 1, 0, 1)
    assert oracle_qmer([], unit, (0.5, 0.5)).rect == unit
    assert oracle_qmer([(0.3, 0.4)], unit, (0.1, 0.9)).rect == AxisRect(0, 1, 0.4, 1)
    assert oracle_qmer([(0.3, 0.4)], unit, (0.1, 0.1)).rect == AxisRect(0, 1, 0, 0.4)
    assert len(oracle_mers([(0.3, 0.4)], unit)) == 4


def test_oracles_deterministic():
    rng = np.random.default_rng(13)
    P = inst.random_points(12, rng)
    poly = inst.random_convex(9, rng)
    rpts, region = inst.random_region_points(8, rng)
    for q in inst.sample_inside(poly, 3, rng):
        assert oracle_qmec_convex(poly, q) == oracle_qmec_convex(poly, q)
        assert oracle_qmec_points(P, q) == oracle_qmec_points(P, q)
        assert SimpleOracle(poly).query(q) == SimpleOracle(poly).query(q)
    q = (0.5, 0.5)
    assert oracle_qmer(rpts, region, q) == oracle_qmer(rpts, region, q)
