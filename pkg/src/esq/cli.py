"""``esq`` command line: query, selftest, bench, render.

Exit codes: 0 ok, 1 selftest mismatch (or a broken depth bound in bench),
2 I/O or parse error, 3 degenerate or invalid geometry.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from contextlib import nullcontext
from dataclasses import dataclass

import numpy as np

from . import harness
from . import instances as inst
from .errors import DegenerateInput, GeometryError, OutsideRegion
from .formats import (
    BenchRecord,
    FormatError,
    Instance,
    answer_record,
    dump_answers,
    load_instance,
    load_queries,
    write_bench_csv,
)
from .geometry import AxisRect, Polygon, convex_hull
from .lcq import CircleSet, LcqArrangement, LcqTree
from .qmec_convex import preprocess_convex, query_convex
from .qmec_points import preprocess_points, query_points
from .qmec_simple import preprocess_simple, query_simple
from .qmer import preprocess_qmer, query_qmer

EXIT_OK, EXIT_MISMATCH, EXIT_IO, EXIT_DEGENERATE = 0, 1, 2, 3
JITTER = 1e-9


def _err(msg: str) -> None:
    print(f"esq: {msg}", file=sys.stderr)


# --- building ------------------------------------------------------------------------


@dataclass
class Built:
    mode: str
    coords: list
    region: AxisRect
    index: object

    def query(self, q):
        return QUERY[self.mode](self.index, q)


QUERY = {"convex": query_convex, "simple": query_simple, "points": query_points, "rect": query_qmer}


def _build(mode: str, coords, region):
    if mode == "convex":
        return preprocess_convex(Polygon(coords))
    if mode == "simple":
        return preprocess_simple(Polygon(coords))
    if mode == "points":
        return preprocess_points(coords)
    return preprocess_qmer(coords, region)


def jitter(coords, seed: int, region: AxisRect = None) -> list:
    """Move every coordinate by 1e-9 of the bounding-box diameter in a seeded direction."""
    P = np.asarray(coords, dtype=float).reshape(-1, 2)
    diam = float(np.hypot(*(P.max(axis=0) - P.min(axis=0)))) if len(P) else 0.0
    if diam == 0.0 and region is not None:
        diam = math.hypot(region.xmax - region.xmin, region.ymax - region.ymin)
    ang = np.random.default_rng(seed).uniform(0.0, 2.0 * math.pi, len(P))
    P = P + JITTER * diam * np.column_stack([np.cos(ang), np.sin(ang)])
    return [tuple(p) for p in P.tolist()]


def build_instance(ins: Instance) -> Built:
    """Build the mode's index; on DegenerateInput retry once with jitter if a seed is given."""
    coords = ins.coordinates
    try:
        return Built(ins.mode, coords, ins.region, _build(ins.mode, coords, ins.region))
    except DegenerateInput as exc:
        if ins.jitter_seed is None:
            raise
        _err(f"{exc}; retrying with jitter seed {ins.jitter_seed}")
    coords = jitter(coords, ins.jitter_seed, ins.region)
    return Built(ins.mode, coords, ins.region, _build(ins.mode, coords, ins.region))


def answer_all(b: Built, queries) -> list:
    out = []
    for q in queries:
        try:
            out.append(answer_record(q, b.query(q)))
        except OutsideRegion as exc:
            out.append(answer_record(q, None, str(exc)))
    return out


# --- subcommands -------------------------------------------------------------------------


def cmd_query(args) -> int:
    ins = load_instance(args.instance)
    queries = load_queries(args.queries)
    b = build_instance(ins)
    text = dump_answers(ins.mode, answer_all(b, queries))
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as exc:
            raise FormatError(f"cannot write {args.out}: {exc.strerror}") from None
    return EXIT_OK


def _fmt_bounds(bounds: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in bounds.items())


def _instance_trial(b: Built, seed: int, trial: int) -> harness.TrialResult:
    rng = harness.trial_rng(seed, trial)
    res = harness.TrialResult(b.mode, seed, trial, len(b.coords))
    if b.mode == "convex":
        return harness.convex_check(Polygon(b.coords), rng, res)
    if b.mode == "simple":
        return harness.simple_check(b.index.polygon, rng, res, b.index)
    if b.mode == "points":
        return harness.points_check(b.coords, rng, res)
    return harness.rect_check(b.coords, b.region, rng, res)


def cmd_selftest(args) -> int:
    built = None
    if args.instance:
        built = build_instance(load_instance(args.instance))
        mode = built.mode
    else:
        mode = args.mode
        if mode is None:
            raise FormatError("selftest needs --mode or --instance")
    trials = [args.trial] if args.trial is not None else range(args.trials)
    failed, worst, peak = [], 0.0, {}
    t0 = time.perf_counter()
    for k in trials:
        if built is not None:
            r = _instance_trial(built, args.seed, k)
        else:
            r = harness.run_trial(mode, args.seed, k, args.n, args.lcq)
        worst = max(worst, r.max_dev)
        for key, v in r.bounds.items():
            peak[key] = max(peak.get(key, v), v)
        extra = f" resampled={r.resampled}" if r.resampled else ""
        print(f"trial {k} n={r.n} max_dev={r.max_dev:.3e} {_fmt_bounds(r.bounds)}{extra}"
              f" {'ok' if r.ok else 'MISMATCH'}")
        if not r.ok:
            failed.append(r)
            for m in r.mismatches[:3]:
                print(f"  q={m.q}: {m.detail}")
            where = f"--instance {args.instance}" if built is not None else f"--mode {mode}"
            size = f" --n {args.n}" if args.n is not None and built is None else ""
            q = r.mismatches[0].q
            print(f"  reproduce: esq selftest {where}{size} --seed {args.seed} --trial {k}  # q={q}")
    print(f"selftest {mode}: {len(trials) - len(failed)}/{len(trials)} trials ok, max_dev={worst:.3e}, "
          f"observed {_fmt_bounds(peak)}, {time.perf_counter() - t0:.1f}s")
    return EXIT_MISMATCH if failed else EXIT_OK


# --- bench ----------------------------------------------------------------------------------


def _bench_case(mode: str, n: int, rng):
    """(build thunk, query function, query domain, depth getter).

    The depth getter returns the structure depth and the element count its
    bound is taken over (0 when the mode has no tree).
    """
    if mode == "convex":
        poly = inst.random_convex(n, rng)
        return (lambda: preprocess_convex(poly), query_convex, poly,
                lambda ix: (ix.axis._locator.ct.depth, ix.axis.node_count()))
    if mode == "simple":
        while True:
            poly = inst.random_simple(n, rng, spike=0.5)
            try:
                preprocess_simple(poly)
                break
            except DegenerateInput:
                continue
        return (lambda: preprocess_simple(poly), query_simple, poly,
                lambda ix: (ix.tree.depth, ix.axis.node_count()))
    if mode == "points":
        pts = inst.random_points(n, rng)
        return (lambda: preprocess_points(pts), query_points, convex_hull(pts),
                lambda ix: (ix.lcq.depth, len(ix.lcq.cs)))
    if mode == "rect":
        pts, region = inst.random_region_points(n, rng)
        return (lambda: preprocess_qmer(pts, region), query_qmer,
                Polygon([(0, 0), (1, 0), (1, 1), (0, 1)]), lambda ix: (0, 0))
    circles = inst.random_circles(n, rng)
    box = Polygon([(0, 0), (10, 0), (10, 10), (0, 10)])
    if mode == "lcq-tree":
        return (lambda: LcqTree(CircleSet(circles)), lambda t, q: t.locate(q), box,
                lambda ix: (ix.depth, n))
    return (lambda: LcqArrangement(CircleSet(circles)), lambda a, q: a.locate(q), box, lambda ix: (0, 0))


def bench_one(mode: str, n: int, seed: int, count: int, repeat: int):
    """Build time is the best of ``min(repeat, 3)`` builds; each query's time is its best over ``repeat`` passes."""
    rng = np.random.default_rng([seed, n])
    build, query, domain, depth_of = _bench_case(mode, n, rng)
    qs = inst.sample_inside(domain, count, rng)
    best_build = math.inf
    for _ in range(min(repeat, 3)):
        t0 = time.perf_counter_ns()
        ix = build()
        best_build = min(best_build, time.perf_counter_ns() - t0)
    per = np.full(len(qs), np.inf)
    clock = time.perf_counter_ns
    for _ in range(repeat):
        for k, q in enumerate(qs):
            t0 = clock()
            query(ix, q)
            per[k] = min(per[k], clock() - t0)
    depth, elems = depth_of(ix)
    rec = BenchRecord(mode, n, seed, int(best_build), float(per.mean()), float(np.percentile(per, 99)),
                      len(qs), int(depth))
    return rec, elems


BENCH_MODES = ("convex", "simple", "points", "rect", "lcq")


def cmd_bench(args) -> int:
    if args.mode not in BENCH_MODES:
        raise FormatError(f"bench mode must be one of {list(BENCH_MODES)}")
    try:
        ns = [int(v) for v in str(args.n).split(",")]
    except ValueError:
        raise FormatError(f"--n must be a comma-separated list of sizes, got {args.n!r}") from None
    modes = [args.mode]
    if args.mode == "lcq":
        modes = {"tree": ["lcq-tree"], "sweep": ["lcq-sweep"], "both": ["lcq-tree", "lcq-sweep"]}[args.lcq]
    records, broken = [], []
    for m in modes:
        for n in ns:
            rec, elems = bench_one(m, n, args.seed, args.count, args.repeat)
            records.append(rec)
            print(f"{m} n={n} build={rec.build_ns / 1e6:.2f}ms mean_query={rec.mean_query_ns / 1e3:.2f}us "
                  f"p99={rec.p99_query_ns / 1e3:.2f}us depth={rec.depth}", file=sys.stderr)
            if elems and rec.depth > harness.depth_bound(elems):
                broken.append(f"{m} n={n}: depth {rec.depth} > ceil(log2 {elems}) + 1")
    try:
        ctx = open(args.csv, "w", encoding="utf-8", newline="") if args.csv not in (None, "-") else nullcontext(sys.stdout)
        with ctx as f:
            write_bench_csv(f, records)
    except OSError as exc:
        raise FormatError(f"cannot write {args.csv}: {exc.strerror}") from None
    for b in broken:
        _err(b)
    return EXIT_MISMATCH if broken else EXIT_OK


# --- render -----------------------------------------------------------------------------------


class _Canvas:
    """World-to-pixel mapping with y pointing up."""

    def __init__(self, x0, x1, y0, y1, width: int = 800):
        pad = 0.05 * max(x1 - x0, y1 - y0, 1e-9)
        self.x0, self.y1 = x0 - pad, y1 + pad
        self.s = width / (x1 - x0 + 2 * pad)
        self.w = width
        self.h = int(math.ceil((y1 - y0 + 2 * pad) * self.s))
        self.items = []

    def xy(self, p):
        return (p[0] - self.x0) * self.s, (self.y1 - p[1]) * self.s

    def add(self, s: str):
        self.items.append(s)

    def svg(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.w}" height="{self.h}" '
                f'viewBox="0 0 {self.w} {self.h}">\n<rect class="background" x="0" y="0" '
                f'width="{self.w}" height="{self.h}" fill="white"/>\n')
        return head + "\n".join(self.items) + "\n</svg>\n"


def _pts(c: _Canvas, ps) -> str:
    return " ".join("%.3f,%.3f" % c.xy(p) for p in ps)


def _overlay(c: _Canvas, b: Built, kind: str) -> None:
    style = 'fill="none" stroke="#3a7" stroke-width="1"'
    if kind == "axis" and b.mode in ("convex", "simple"):
        ax = b.index.axis
        for arc in ax.arcs:
            c.add(f'<polyline class="axis" {style} points="{_pts(c, [arc.point(k / 16) for k in range(17)])}"/>')
    elif kind == "voronoi" and b.mode == "points":
        vd = b.index.vd
        far = 2.0 * max(c.w, c.h) / c.s
        for e in vd.edges:
            t1 = e.ta + far if e.unbounded else e.tb
            c.add(f'<polyline class="voronoi" {style} points="{_pts(c, [e.point(e.ta), e.point(t1)])}"/>')
    elif kind == "grid" and b.mode == "rect":
        ix, r = b.index, b.region
        for x in ix.xs[1:-1]:
            c.add(f'<polyline class="grid" {style} points="{_pts(c, [(x, r.ymin), (x, r.ymax)])}"/>')
        for y in ix.ys[1:-1]:
            c.add(f'<polyline class="grid" {style} points="{_pts(c, [(r.xmin, y), (r.xmax, y)])}"/>')
    elif kind != "none":
        _err(f"overlay {kind!r} does not apply to mode {b.mode}; ignored")


def render_svg(b: Built, queries, answers, overlay: str = "none") -> str:
    P = np.asarray(b.coords, dtype=float).reshape(-1, 2)
    boxes = [P] if len(P) else []
    if b.region is not None:
        r = b.region
        boxes.append(np.array([[r.xmin, r.ymin], [r.xmax, r.ymax]]))
    if queries:
        boxes.append(np.asarray(queries, dtype=float))
    for a in answers:
        if a["kind"] == "bounded":
            (x, y), rad = a["center"], a["radius"]
            boxes.append(np.array([[x - rad, y - rad], [x + rad, y + rad]]))
    B = np.vstack(boxes)
    c = _Canvas(B[:, 0].min(), B[:, 0].max(), B[:, 1].min(), B[:, 1].max())
    if b.region is not None:
        r = b.region
        c.add(f'<polygon class="region" fill="none" stroke="black" stroke-width="1.5" '
              f'points="{_pts(c, [(r.xmin, r.ymin), (r.xmax, r.ymin), (r.xmax, r.ymax), (r.xmin, r.ymax)])}"/>')
    if b.mode in ("convex", "simple"):
        c.add(f'<polygon class="input" fill="none" stroke="black" stroke-width="1.5" points="{_pts(c, b.coords)}"/>')
    else:
        for p in b.coords:
            x, y = c.xy(p)
            c.add(f'<rect class="input" x="{x - 2:.3f}" y="{y - 2:.3f}" width="4" height="4" fill="black"/>')
    _overlay(c, b, overlay)
    for a in answers:
        if a["kind"] == "bounded":
            x, y = c.xy(a["center"])
            c.add(f'<circle class="answer" cx="{x:.3f}" cy="{y:.3f}" r="{a["radius"] * c.s:.3f}" '
                  f'fill="none" stroke="#c33" stroke-width="1.5"/>')
        elif a["kind"] == "rectangle":
            x0, x1, y0, y1 = a["rect"]
            c.add(f'<polygon class="answer" fill="none" stroke="#c33" stroke-width="1.5" '
                  f'points="{_pts(c, [(x0, y0), (x1, y0), (x1, y1), (x0, y1)])}"/>')
    for q in queries:
        x, y = c.xy(q)
        c.add(f'<path class="query" d="M{x - 4:.3f},{y - 4:.3f}L{x + 4:.3f},{y + 4:.3f}'
              f'M{x - 4:.3f},{y + 4:.3f}L{x + 4:.3f},{y - 4:.3f}" stroke="#22c" stroke-width="1.5"/>')
    return c.svg()


def cmd_render(args) -> int:
    b = build_instance(load_instance(args.instance))
    queries = load_queries(args.queries) if args.queries else []
    text = render_svg(b, queries, answer_all(b, queries), args.overlay)
    try:
        with open(args.svg, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as exc:
        raise FormatError(f"cannot write {args.svg}: {exc.strerror}") from None
    return EXIT_OK


# --- entry point -------------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="esq", description="Largest empty circle / rectangle containing a query point.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="answer a batch of queries")
    q.add_argument("--instance", required=True)
    q.add_argument("--queries", required=True)
    q.add_argument("--out", help="answers file (default stdout)")

    s = sub.add_parser("selftest", help="randomized index-vs-oracle comparison")
    s.add_argument("--mode", choices=harness.MODES)
    s.add_argument("--instance", help="test this instance with random queries instead of random instances")
    s.add_argument("--n", type=int, help="largest instance size")
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--trial", type=int, help="replay a single trial")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--lcq", choices=("tree", "sweep", "both"), default="both")

    b = sub.add_parser("bench", help="build/query timings as CSV")
    b.add_argument("--mode", required=True)
    b.add_argument("--n", default="64,128,256", help="comma-separated sizes")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv", help="output file (default stdout)")
    b.add_argument("--lcq", choices=("tree", "sweep", "both"), default="tree")
    b.add_argument("--count", type=int, default=200, help="queries per size")
    b.add_argument("--repeat", type=int, default=5, help="timing passes per query")

    r = sub.add_parser("render", help="draw an instance and its answers as SVG")
    r.add_argument("--instance", required=True)
    r.add_argument("--queries")
    r.add_argument("--svg", required=True)
    r.add_argument("--overlay", choices=("none", "axis", "voronoi", "grid"), default="none")
    return p


COMMANDS = {"query": cmd_query, "selftest": cmd_selftest, "bench": cmd_bench, "render": cmd_render}


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_IO
    try:
        return COMMANDS[args.command](args)
    except FormatError as exc:
        _err(str(exc))
        return EXIT_IO
    except GeometryError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
