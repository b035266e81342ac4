import numpy as np
import pytest

from esq import _pykernels as py
from esq import instances as inst
from esq import kernels

ck = pytest.importorskip("esq._ckernels")


def _case(seed):
    rng = np.random.default_rng(seed)
    poly = inst.random_simple(int(rng.integers(5, 25)), rng)
    V = np.array(poly.vertices, dtype=float)
    segs = np.hstack([V, np.roll(V, -1, axis=0)])
    P = rng.uniform(-1, 11, (500, 2))
    return poly, V, segs, P, rng


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("seed", range(5))
def test_min_seg_dist_parity(seed):
    _, _, segs, P, _ = _case(seed)
    a = py.min_seg_dist(P[:, 0], P[:, 1], segs)
    b = ck.min_seg_dist(P[:, 0].copy(), P[:, 1].copy(), segs)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("seed", range(5))
def test_inside_polygon_parity(seed):
    _, V, _, P, _ = _case(seed)
    # vertices and edge midpoints exercise the half-open crossing rule
    P = np.vstack([P, V, 0.5 * (V + np.roll(V, -1, axis=0))])
    a = py.inside_polygon(P[:, 0], P[:, 1], V)
    b = ck.inside_polygon(P[:, 0].copy(), P[:, 1].copy(), V)
    assert (a == b).all()


@pytest.mark.parametrize("seed", range(4))
def test_refine_constrained_parity(seed):
    poly, V, segs, _, rng = _case(seed)
    for q in inst.sample_inside(poly, 5, rng):
        args = (q[0], q[1], q[0], q[1], segs, V, 0.5, 1e-7, 16)
        xa, ya, ra = py.refine_constrained(*args)
        xb, yb, rb = ck.refine_constrained(*args)
        assert ra == pytest.approx(rb, rel=1e-9, abs=1e-12)
        assert (xa, ya) == pytest.approx((xb, yb), abs=1e-6)


def test_degenerate_segment():
    segs = np.array([[1.0, 1.0, 1.0, 1.0]])
    for mod in (py, ck):
        assert mod.min_seg_dist(np.array([4.0]), np.array([5.0]), segs)[0] == pytest.approx(5.0)
