import math
from collections import deque

import numpy as np
import pytest

from esq import instances as inst
from esq.errors import DegenerateInput, OutsidePolygon, PreconditionViolated
from esq.geometry import Polygon, clearance, point_segment_distance
from esq.medial_axis import (
    AxisLocation,
    CentroidTree,
    MedialAxis,
    build_medial_axis,
    centroid_of_subtree,
    clearance_on_arc,
    largest_mec_on_rising_path,
    locate_nearest_axis_arc,
    split_into_mountains,
)

SQUARE = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
RECT = Polygon([(0, 0), (2, 0), (2, 1), (0, 1)])


def _internal(ax):
    return [x for x in range(ax.node_count()) if not ax.is_leaf[x]]


def _degree(ax, x):
    return len(ax.adj[x])


def test_square_axis():
    ax = build_medial_axis(SQUARE)
    (c,) = _internal(ax)
    assert ax.pos[c] == pytest.approx((0.5, 0.5)) and ax.radius[c] == pytest.approx(0.5)
    assert len(ax.arcs) == 4 and all(a.kind == "segment" for a in ax.arcs)


def test_rectangle_axis_and_spine():
    ax = build_medial_axis(RECT)
    deg3 = sorted(tuple(round(v, 12) for v in ax.pos[x]) for x in range(ax.node_count()) if _degree(ax, x) == 3)
    assert deg3 == [(0.5, 0.5), (1.5, 0.5)]
    spine = [a for a in ax.arcs if a.r0 == pytest.approx(0.5) and a.r1 == pytest.approx(0.5)]
    assert spine
    for a in spine:
        for t in np.linspace(0, 1, 5):
            assert clearance_on_arc(ax, a.id, t) == pytest.approx(0.5)


def test_equilateral_triangle_node():
    tri = Polygon([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])
    ax = build_medial_axis(tri)
    (c,) = _internal(ax)
    assert ax.radius[c] == pytest.approx(1 / (2 * math.sqrt(3)), rel=1e-12)
    assert ax.pos[c] == pytest.approx((0.5, math.sqrt(3) / 6))


def test_square_diagonal_clearance():
    ax = build_medial_axis(SQUARE)
    (arc,) = [a for a in ax.arcs if ax.pos[a.u] == pytest.approx((0, 0))]
    assert clearance_on_arc(ax, arc.id, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert clearance_on_arc(ax, arc.id, 0.5) == pytest.approx(0.25)
    assert clearance_on_arc(ax, arc.id, 1.0) == pytest.approx(0.5)


def test_locate_examples():
    ax = build_medial_axis(SQUARE)
    k, x = locate_nearest_axis_arc(ax, (0.1, 0.12))
    assert ax.pos[ax.arcs[k].u] == pytest.approx((0, 0))
    k, x = locate_nearest_axis_arc(ax, (0.5, 0.25))
    assert {tuple(map(round, ax.pos[ax.arcs[k].u]))} <= {(0, 0), (1, 0)}
    rx = build_medial_axis(RECT)
    k, x = locate_nearest_axis_arc(rx, (1.0, 0.6))
    assert x == pytest.approx((1.0, 0.5))
    with pytest.raises(OutsidePolygon):
        ax.locate((2, 2))


def test_rising_path_examples():
    ax = build_medial_axis(SQUARE)
    q = (0.1, 0.1)
    c = largest_mec_on_rising_path(ax, ax.locate(q), None, q)
    assert c.radius == pytest.approx(0.1 * (2 + math.sqrt(2)), rel=1e-9)
    assert c.center[0] == pytest.approx(c.center[1])
    q = (0.5, 0.5)
    c = largest_mec_on_rising_path(ax, ax.locate(q), None, q)
    assert c.radius == pytest.approx(0.5) and c.center == pytest.approx((0.5, 0.5))
    rx = build_medial_axis(RECT)
    q = (0.5, 0.5)
    c = largest_mec_on_rising_path(rx, rx.locate(q), None, q)
    assert c.radius == pytest.approx(0.5) and c.center == pytest.approx((1.0, 0.5))


def test_rising_path_precondition():
    ax = build_medial_axis(SQUARE)
    (arc,) = [a for a in ax.arcs if ax.pos[a.u] == pytest.approx((0, 0))]
    start = AxisLocation(arc.id, 0.1, arc.point(0.1))
    with pytest.raises(PreconditionViolated):
        ax.climb(start, (0.9, 0.9))


def _audit(ax, poly):
    N = ax.node_count()
    assert len(ax.arcs) == N - 1
    seen, dq = {0}, deque([0])
    while dq:
        x = dq.popleft()
        for w, _ in ax.neighbors(x):
            if w not in seen:
                seen.add(w)
                dq.append(w)
    assert len(seen) == N
    convex = {i for i in range(len(poly)) if i not in set(poly.reflex_vertices())}
    leaves = {tuple(ax.pos[x]) for x in range(N) if ax.is_leaf[x]}
    assert leaves == {tuple(poly.vertices[i]) for i in convex}
    for x in range(N):
        if ax.is_leaf[x]:
            continue
        assert abs(ax.radius[x] - clearance(poly, ax.pos[x])) <= 1e-7
        if _degree(ax, x) >= 3:
            touching = [i for i, (a, b) in enumerate(poly.edges())
                        if abs(point_segment_distance(ax.pos[x], a, b) - ax.radius[x]) <= 1e-6]
            assert len(touching) >= 2  # edges; a reflex vertex contact touches two edges' ends
    for a in ax.arcs:
        rs = [a.radius(t) for t in np.linspace(0, 1, 33)]
        assert all(r2 >= r1 - 1e-9 for r1, r2 in zip(rs, rs[1:])), "arc clearance must rise from u to v"
        for t in (0.25, 0.5, 0.75):
            assert abs(a.radius(t) - clearance(poly, a.point(t))) <= 1e-7


def _simple_axes(n_polys, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n_polys:
        poly = inst.random_simple(int(rng.integers(5, 16)), rng, spike=float(rng.uniform(0.2, 0.8)))
        try:
            out.append((poly, MedialAxis(poly, require_distinct=True)))
        except DegenerateInput:
            continue
    return out


def test_structure_random(rng):
    for _ in range(15):
        poly = inst.random_convex(int(rng.integers(3, 30)), rng)
        _audit(MedialAxis(poly), poly)
    for poly, ax in _simple_axes(15, 5):
        _audit(ax, poly)


def test_mountains_partition_and_monotone():
    for poly, ax in _simple_axes(100, 11):
        ms = split_into_mountains(ax)
        owned = sorted(k for m in ms for k in m.arcs)
        assert owned == list(range(len(ax.arcs)))
        for m in ms:
            assert sum(1 for x in m.nodes if x == m.peak) == 1
            # walking parent links from any mountain node reaches the peak with rising clearance
            for x in m.nodes:
                if x in m.valleys:
                    continue
                while ax.parent[x] != -1:
                    assert ax.radius[ax.parent[x]] > ax.radius[x]
                    x = ax.parent[x]
                assert x == m.peak
        for v in ax.valleys:
            assert len({ax.arcs[k].mountain for k in ax.adj[v]}) == 2


def test_convex_single_mountain(rng):
    for _ in range(10):
        ax = MedialAxis(inst.random_convex(int(rng.integers(3, 40)), rng))
        assert len(ax.mountains) == 1


def test_dumbbell_two_mountains():
    ax = MedialAxis(inst.dumbbell(), require_distinct=True)
    assert len(ax.mountains) == 2
    (v,) = ax.valleys
    assert 4.0 < ax.pos[v][0] < 7.0  # in the corridor
    assert ax.radius[v] == pytest.approx(min(ax.radius[x] for x in range(ax.node_count())
                                             if 4.0 < ax.pos[x][0] < 7.0 and not ax.is_leaf[x]))


def test_centroid_small_trees():
    path = {0: [1], 1: [0, 2], 2: [1]}
    assert centroid_of_subtree(lambda x: path[x], [0, 1, 2]) == 1
    star = {0: [1, 2, 3, 4], 1: [0], 2: [0], 3: [0], 4: [0]}
    assert centroid_of_subtree(lambda x: star[x], list(star)) == 0


def _components_without(adj, nodes, c):
    nodes = set(nodes) - {c}
    sizes, seen = [], set()
    for s in nodes:
        if s in seen:
            continue
        seen.add(s)
        dq, k = [s], 0
        while dq:
            x = dq.pop()
            k += 1
            for y in adj[x]:
                if y in nodes and y not in seen:
                    seen.add(y)
                    dq.append(y)
        sizes.append(k)
    return sizes


def test_centroid_random_200_tree(rng):
    adj = {0: []}
    for x in range(1, 200):
        p = int(rng.integers(0, x))
        adj[x] = [p]
        adj[p].append(x)
    c = centroid_of_subtree(lambda x: adj[x], list(adj))
    assert max(_components_without(adj, adj, c)) <= 100


def test_centroid_tree_every_level(rng):
    for poly, ax in _simple_axes(10, 23):
        ct = CentroidTree(ax)
        nbrs = {x: [w for w, _ in ax.neighbors(x)] for x in range(ax.node_count())}
        for cn in ct.nodes:
            n = len(cn.members)
            assert max(_components_without(nbrs, cn.members, cn.node), default=0) <= math.ceil(n / 2)
        assert ct.depth <= math.ceil(math.log2(ax.node_count())) + 1


def _mq_components(ax, q, samples=500):
    """Components of {x on the axis : q in MEC_x}, sampled per arc."""
    tol = 1e-9 * ax.scale
    ts = np.linspace(0.0, 1.0, samples + 1)
    parent = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        parent.setdefault(a, a)
        parent.setdefault(b, b)
        parent[find(a)] = find(b)

    for a in ax.arcs:
        ok = [math.dist(a.point(t), q) <= a.radius(t) + tol for t in ts]
        runs, k = [], 0
        while k < len(ok):
            if ok[k]:
                j = k
                while j + 1 < len(ok) and ok[j + 1]:
                    j += 1
                runs.append((k, j))
                k = j + 1
            else:
                k += 1
        for r in runs:
            parent.setdefault(("arc", a.id, r), ("arc", a.id, r))
            if r[0] == 0:
                union(("arc", a.id, r), ("node", a.u))
            if r[1] == samples:
                union(("arc", a.id, r), ("node", a.v))
    return len({find(x) for x in parent})


def test_mq_connectivity():
    rng = np.random.default_rng(77)
    polys = [p for p, _ in _simple_axes(50, 41)] + [inst.random_convex(int(rng.integers(3, 20)), rng) for _ in range(10)]
    for poly in polys:
        ax = MedialAxis(poly)
        for q in inst.sample_inside(poly, 3, rng):
            assert _mq_components(ax, q) == 1
