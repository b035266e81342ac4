"""Acceptance criteria, one test each; every test records a PASS/FAIL line."""
import math
import time

import numpy as np
import pytest

from esq import harness
from esq import instances as inst
from esq.cli import bench_one
from esq.medial_axis import CentroidTree

from test_medial_axis import _components_without, _mq_components, _simple_axes
from test_qmec_points import test_unique_containing_path

SEED = 2024


def _run(mode, count, **kw):
    t0 = time.perf_counter()
    results = [harness.run_trial(mode, SEED, k, **kw) for k in range(count)]
    return results, time.perf_counter() - t0


def _peak(results, key):
    return max((r.bounds.get(key, 0) for r in results), default=0)


def _summary(results, secs):
    bad = [r for r in results if not r.ok]
    worst = max((r.max_dev for r in results), default=0.0)
    return bad, f"{len(results) - len(bad)}/{len(results)} instances, max dev {worst:.2e}, {secs:.1f}s"


@pytest.fixture(scope="module")
def simple_runs():
    results, secs = _run("simple", 100)
    t0 = time.perf_counter()
    for k, (name, poly) in enumerate(inst.multi_mountain()):
        res = harness.TrialResult("simple", SEED, 1000 + k, len(poly.vertices))
        results.append(harness.simple_check(poly, harness.trial_rng(SEED, 1000 + k), res))
    return results, secs + time.perf_counter() - t0


@pytest.fixture(scope="module")
def points_runs():
    return _run("points", 200)


def test_lcq_equivalence(accept):
    results, secs = _run("lcq", 500, lcq="both")
    bad, text = _summary(results, secs)
    depth_ok = all(r.bounds["tree_depth"] <= r.bounds["depth_bound"] for r in results)
    ok = not bad and depth_ok and secs < 60
    assert accept("LCQ tree = sweep = scan (500 sets, n<=64, 50 q)", ok, text), [r.reproducer() for r in bad]


def test_convex_qmec(accept):
    results, secs = _run("convex", 200)
    bad, text = _summary(results, secs)
    ok = not bad and secs < 60
    assert accept("convex QMEC within 1e-6, clearance within 1e-7 (200 polygons)", ok, text), \
        [r.reproducer() for r in bad]


def test_simple_qmec(accept, simple_runs):
    results, secs = simple_runs
    bad, text = _summary(results, secs)
    redrawn = sum(r.resampled for r in results)
    ok = not bad and secs < 600
    assert accept("simple QMEC within 1e-4 (100 random + 5 constructed)", ok, f"{text}, {redrawn} redrawn"), \
        [r.reproducer() for r in bad]


def test_points_qmec(accept, points_runs):
    results, secs = points_runs
    bad, text = _summary(results, secs)
    ok = not bad and secs < 300
    assert accept("point-set QMEC within 1e-6, hull boundary/outside unbounded (200 sets)", ok, text), \
        [r.reproducer() for r in bad]


def test_qmer(accept):
    results, secs = _run("rect", 100)
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    from esq.qmer import preprocess_qmer, query_qmer

    split = 0
    for _ in range(40):
        pts, region = inst.random_region_points(int(rng.integers(0, 9)), rng)
        idx = preprocess_qmer(pts, region)
        for c in range(len(idx.xs) - 1):
            for r in range(len(idx.ys) - 1):
                lo, hi = (idx.xs[c], idx.ys[r]), (idx.xs[c + 1], idx.ys[r + 1])
                S = rng.uniform(lo, hi, (10, 2)).tolist()
                split += len({query_qmer(idx, q).rect for q in S}) > 1
    secs += time.perf_counter() - t0
    bad, text = _summary(results, secs)
    ok = not bad and split == 0 and secs < 120
    assert accept("QMER exact (100 sets, n<=12) and cell invariance (n<=8)", ok,
                  f"{text}, {split} split cells"), [r.reproducer() for r in bad]


def test_structural_bounds(accept, simple_runs, points_runs):
    s_r = _peak(simple_runs[0], "S_r")
    s_q = _peak(simple_runs[0], "S_q")
    o_v = _peak(points_runs[0], "O_v")
    worst_split = 0.0
    for _, ax in _simple_axes(20, 5):
        ct = CentroidTree(ax)
        nbrs = {x: [w for w, _ in ax.neighbors(x)] for x in range(ax.node_count())}
        for cn in ct.nodes:
            big = max(_components_without(nbrs, cn.members, cn.node), default=0)
            worst_split = max(worst_split, big / math.ceil(len(cn.members) / 2))
    test_unique_containing_path()
    rng = np.random.default_rng(SEED)
    disconnected = 0
    for poly, ax in _simple_axes(50, 6):
        disconnected += sum(_mq_components(ax, q) != 1 for q in inst.sample_inside(poly, 2, rng))
    ok = s_r <= 36 and s_q <= 36 and o_v <= 36 and worst_split <= 1.0 and disconnected == 0
    detail = (f"max |S_r|={s_r}, |S_q|={s_q}, |O_v|={o_v}; centroid split ratio {worst_split:.2f}; "
              f"unique path ok; M^q disconnected {disconnected}")
    assert accept("structural bounds: guiding circles, O_v, centroid split, unique path, M^q connectivity", ok, detail)


def test_scaling_shape(accept):
    """Time ratios are reported; only the depth bounds are asserted."""
    depth_bad = []

    def run(mode, sizes, count=200):
        recs = []
        for n in sizes:
            rec, elems = bench_one(mode, n, 0, count, 3)
            if rec.depth > harness.depth_bound(elems) and elems:
                depth_bad.append((mode, n, rec.depth, elems))
            recs.append(rec)
        return recs

    pts = run("points", [64, 128, 256, 512, 1024])
    build = [b.build_ns / a.build_ns for a, b in zip(pts[:4], pts[1:4])]
    build_ok = all(2.5 <= x <= 8 for x in build)
    pq = [b.mean_query_ns / a.mean_query_ns for a, b in zip(pts, pts[1:])]
    cv = run("convex", [2 ** k for k in range(10, 15)])
    cq = [b.mean_query_ns / a.mean_query_ns for a, b in zip(cv, cv[1:])]
    run("lcq-tree", [64, 128, 256, 512], count=50)
    # the general simple-polygon axis build is quartic; convex runs cover large centroid trees
    run("simple", [32, 64], count=50)
    fmt = lambda xs: "[" + ", ".join(f"{x:.2f}" for x in xs) + "]"
    accept("scaling: points build ratio in [2.5, 8] (informational)", build_ok, fmt(build))
    accept("scaling: points query ratio < 2 (informational)", max(pq) < 2, fmt(pq))
    accept("scaling: convex query ratio < 2 (informational)", max(cq) < 2, fmt(cq))
    depths = ", ".join(f"{r.mode}:{r.n}->{r.depth}" for r in pts + cv)
    assert accept("scaling: tree depths <= ceil(log2 n)+1 (hard)", not depth_bad, depth_bad or depths)
