"""Compiled vs numpy kernels on the simple-polygon oracle workload.

    python3 benchmarks/bench_kernels.py [--n 30] [--points 20000] [--repeat 5]
"""
import argparse
import time

import numpy as np

from esq import _pykernels
from esq import instances as inst

try:
    from esq import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    poly = inst.random_simple(args.n, rng)
    V = np.array(poly.vertices, dtype=float)
    segs = np.hstack([V, np.roll(V, -1, axis=0)])
    x, y = rng.uniform(0, 10, (2, args.points))
    q = inst.sample_inside(poly, 1, rng)[0]

    backends = [("numpy", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    cases = {
        "min_seg_dist": lambda m: m.min_seg_dist(x, y, segs),
        "inside_polygon": lambda m: m.inside_polygon(x, y, V),
        "refine_constrained": lambda m: m.refine_constrained(q[0], q[1], q[0], q[1], segs, V, 0.5, 1e-7, 16),
    }
    print(f"n={args.n} points={args.points} best of {args.repeat}")
    print(f"{'kernel':<20}" + "".join(f"{name:>12}" for name, _ in backends) + "     speedup")
    for label, fn in cases.items():
        times = [best_of(lambda m=m: fn(m), args.repeat) for _, m in backends]
        speed = f"{times[0] / times[-1]:>11.1f}x" if len(times) > 1 else ""
        print(f"{label:<20}" + "".join(f"{t * 1e3:>10.3f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
