import math

import numpy as np
import pytest

from esq import instances as inst
from esq.errors import DegenerateInput, NotSimple, PreconditionViolated
from esq.geometry import AnswerKind, Polygon, clearance
from esq.oracles import SimpleOracle
from esq.qmec_convex import preprocess_convex, query_convex
from esq.qmec_simple import build_guiding_set, mim_query, preprocess_simple, qic_query, query_simple

GUIDE_BOUND = 36


def _random_indices(count, seed, n_max=30):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        poly = inst.random_simple(int(rng.integers(5, n_max + 1)), rng, spike=float(rng.uniform(0.2, 0.8)))
        try:
            out.append((poly, preprocess_simple(poly)))
        except DegenerateInput:
            continue
    return out, rng


def test_convex_input_matches_convex_index(rng):
    poly = inst.random_convex(17, rng)
    idx, cidx = preprocess_simple(poly), preprocess_convex(poly)
    assert len(idx.mountains) == 1
    for q in inst.sample_inside(poly, 100, rng):
        assert query_simple(idx, q).radius == pytest.approx(query_convex(cidx, q).radius, abs=1e-9)


def test_square_matches_convex(rng):
    sq = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    idx, cidx = preprocess_simple(sq), preprocess_convex(sq)
    for q in rng.uniform(0.01, 0.99, (50, 2)).tolist():
        assert query_simple(idx, q).radius == pytest.approx(query_convex(cidx, q).radius, abs=1e-9)


def test_outside_and_not_simple():
    idx = preprocess_simple(inst.l_shape())
    assert query_simple(idx, (5, 5)).kind is AnswerKind.UNBOUNDED
    assert query_simple(idx, (0, 1)).kind is AnswerKind.UNBOUNDED
    with pytest.raises(NotSimple):
        preprocess_simple([(0, 0), (4, 0), (4, 4), (2, -1), (0, 4)])


def test_dumbbell_mountains_and_depth():
    idx = preprocess_simple(inst.dumbbell())
    assert len(idx.mountains) >= 2
    assert idx.tree.depth <= math.ceil(math.log2(idx.axis.node_count())) + 1
    assert max(len(t) for t in idx.tags) <= idx.tree.depth


def test_dumbbell_left_room_query():
    poly = inst.dumbbell(skew=1.5)
    idx = preprocess_simple(poly)
    oracle = SimpleOracle(poly)
    ax = idx.axis
    right_peak = max(ax.radius[x] for x in range(ax.node_count()) if ax.pos[x][0] > 7.0)
    assert right_peak > max(ax.radius[x] for x in range(ax.node_count()) if ax.pos[x][0] < 4.0)
    for q in [(3.5, 0.3), (3.9, -0.2), (2.0, 1.0)]:
        a = query_simple(idx, q)
        assert a.circle.center[0] < 4.0 and a.radius < right_peak
        assert a.radius == pytest.approx(oracle.query(q).radius, rel=1e-4)


def test_mim_entry_at_peak():
    poly = inst.dumbbell()
    idx = preprocess_simple(poly)
    ax = idx.axis
    for m in ax.mountains:
        k = ax.adj[m.peak][0]
        entry = ax.locate(ax.pos[m.peak])
        c = mim_query(ax, ax.mountains[ax.mountain_of_arc[entry.arc]], entry, ax.pos[m.peak])
        assert c.radius == pytest.approx(ax.radius[m.peak])
        assert k is not None


def test_mim_on_convex_matches_convex(rng):
    poly = inst.random_convex(12, rng)
    idx, cidx = preprocess_simple(poly), preprocess_convex(poly)
    ax = idx.axis
    for q in inst.sample_inside(poly, 20, rng):
        loc = ax.locate(q)
        c = mim_query(ax, ax.mountains[0], loc, q)
        assert c.radius == pytest.approx(query_convex(cidx, q).radius, abs=1e-9)


def test_guiding_set_of_convex_peak(rng):
    poly = inst.random_convex(15, rng)
    idx = preprocess_simple(poly)
    ax = idx.axis
    peak = ax.mountains[0].peak
    gs = build_guiding_set(ax, peak, range(ax.node_count()))
    assert [g.circle.radius for g in gs.circles] == [ax.radius[peak]]


def test_flower_root_guides_span_mountains():
    idx = preprocess_simple(inst.flower(5))
    g = idx.guides[idx.tree.root]
    assert len({m for c in g.circles for m in c.mountains}) >= 2


def test_qic_precondition():
    idx = preprocess_simple(inst.dumbbell())
    ci = idx.tree.root
    v = idx.guides[ci].v
    far = next(p for p in [(0.2, 0.2), (10.5, 0.0), (5.5, 0.0)] if not idx.axis.node_contains(v, p))
    with pytest.raises(PreconditionViolated):
        qic_query(idx, ci, far)


def test_guiding_bounds_random():
    built, rng = _random_indices(100, 3)
    for poly, idx in built:
        assert idx.stats["max_guides_per_radius"] <= GUIDE_BOUND
        for q in inst.sample_inside(poly, 5, rng):
            trace = {}
            query_simple(idx, q, trace)
            assert trace.get("S_q", 0) <= GUIDE_BOUND
            assert len(trace.get("mountains", [])) <= GUIDE_BOUND


def test_guides_overlap_centroid_mec():
    built, _ = _random_indices(20, 8)
    for poly, idx in built:
        ax = idx.axis
        for gs in idx.guides:
            cv = ax.node_circle(gs.v)
            for g in gs.circles:
                d = math.dist(g.circle.center, cv.center)
                assert d <= g.circle.radius + cv.radius + ax.tol


def _descent_audit(idx, q, ts=np.linspace(0.0, 1.0, 41)):
    """Components dropped during the descent hold no axis point whose MEC contains q."""
    ax, tree = idx.axis, idx.tree
    tag = idx.tags[ax.locate(q).arc]
    ci, level = tree.root, 0
    while not ax.node_contains(tree.nodes[ci].node, q) and level < len(tag):
        nxt = tag[level]
        c = tree.nodes[ci].node
        dropped = set(tree.nodes[ci].members) - set(tree.nodes[nxt].members) - {c}
        for a in ax.arcs:
            if not ({a.u, a.v} & dropped) or not {a.u, a.v} <= dropped | {c}:
                continue
            for t in ts:
                if (t == 0.0 and a.u == c) or (t == 1.0 and a.v == c):
                    continue
                x = a.point(t)
                assert math.dist(x, q) > a.radius(t) - ax.tol
        ci, level = nxt, level + 1
    return level


def test_descent_discards_only_irrelevant_components():
    built, rng = _random_indices(25, 19)
    levels = 0
    for poly, idx in built:
        for q in inst.sample_inside(poly, 8, rng):
            levels += _descent_audit(idx, q)
    assert levels > 50  # the audit must actually see descents


def test_random_against_oracle_and_validity():
    built, rng = _random_indices(12, 29, n_max=20)
    for poly, idx in built:
        oracle = SimpleOracle(poly)
        for q in inst.sample_inside(poly, 8, rng):
            a = query_simple(idx, q)
            assert a.radius == pytest.approx(oracle.query(q).radius, rel=1e-4)
            # empty, contains q, and cannot grow in place
            assert abs(clearance(poly, a.circle.center) - a.radius) <= 1e-7
            assert math.dist(a.circle.center, q) <= a.radius + 1e-9


@pytest.mark.parametrize("name,poly", inst.multi_mountain(), ids=[n for n, _ in inst.multi_mountain()])
def test_constructed_multi_mountain(name, poly, rng):
    idx = preprocess_simple(poly)
    oracle = SimpleOracle(poly)
    for q in inst.sample_inside(poly, 10, rng):
        assert query_simple(idx, q).radius == pytest.approx(oracle.query(q).radius, rel=1e-4)
