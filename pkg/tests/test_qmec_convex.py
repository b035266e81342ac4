import math

import numpy as np
import pytest

from esq import instances as inst
from esq.errors import NotConvex
from esq.geometry import AnswerKind, Polygon, clearance
from esq.oracles import oracle_qmec_convex
from esq.qmec_convex import ConvexInside, preprocess_convex, query_convex
from esq.geometry import Location, point_in_polygon

SQUARE = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


def test_square_index():
    idx = preprocess_convex(SQUARE)
    assert idx.cell_count == 4
    assert idx.axis.pos[idx.root] == pytest.approx((0.5, 0.5))


def test_hexagon_root():
    idx = preprocess_convex(inst.regular_polygon(6, 1.0))
    assert idx.axis.pos[idx.root] == pytest.approx((0, 0), abs=1e-12)
    assert idx.axis.radius[idx.root] == pytest.approx(math.sqrt(3) / 2)


def test_not_convex():
    with pytest.raises(NotConvex):
        preprocess_convex(inst.l_shape())


@pytest.mark.parametrize("q,kind,r", [((2, 2), AnswerKind.UNBOUNDED, None),
                                      ((1, 0.5), AnswerKind.UNBOUNDED, None),
                                      ((0.3, 0.5), AnswerKind.BOUNDED, 0.5),
                                      ((0.1, 0.1), AnswerKind.BOUNDED, 0.1 * (2 + math.sqrt(2)))])
def test_square_queries(q, kind, r):
    a = query_convex(preprocess_convex(SQUARE), q)
    assert a.kind is kind
    if r is not None:
        assert a.radius == pytest.approx(r, rel=1e-9)


def test_answer_valid_and_matches_oracle(rng):
    for _ in range(30):
        poly = inst.random_convex(int(rng.integers(3, 41)), rng)
        idx = preprocess_convex(poly)
        for q in inst.sample_inside(poly, 10, rng):
            a = query_convex(idx, q)
            o = oracle_qmec_convex(poly, q)
            assert a.radius == pytest.approx(o.radius, rel=1e-6)
            assert clearance(poly, a.circle.center) >= a.radius - 1e-7
            assert math.dist(a.circle.center, q) <= a.radius + 1e-9


def test_climbs_from_both_neighbouring_paths_agree(rng):
    # the retraction may land on either arc bounding q's cell; answers agree
    poly = inst.random_convex(25, rng)
    idx = preprocess_convex(poly)
    ax = idx.axis
    for q in inst.sample_inside(poly, 20, rng):
        s = ax.nearest_site(q)
        viaa = ax.climb(ax.retract(s, q), q)
        assert viaa.radius == pytest.approx(query_convex(idx, q).radius, abs=1e-9)


def test_inside_classifier(rng):
    for _ in range(10):
        poly = inst.random_convex(int(rng.integers(3, 60)), rng)
        ci = ConvexInside(poly.vertices)
        for q in rng.uniform(-1, 21, (200, 2)).tolist():
            assert ci.classify(q) is point_in_polygon(poly, q)
        for a, b in poly.edges():
            m = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            assert ci.classify(m) is Location.ON_BOUNDARY


def test_large_polygon_spot_check():
    rng = np.random.default_rng(9)
    poly = inst.random_convex(4096, rng)
    idx = preprocess_convex(poly)
    assert idx.axis._locator.ct.depth <= math.ceil(math.log2(idx.axis.node_count())) + 1
    # the triple-enumeration oracle is out of reach at this size; check validity
    for q in inst.sample_inside(poly, 20, rng):
        a = query_convex(idx, q)
        assert abs(clearance(poly, a.circle.center) - a.radius) <= 1e-7
        assert math.dist(a.circle.center, q) <= a.radius + 1e-9
