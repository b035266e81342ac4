"""Randomized index-vs-oracle trials shared by ``esq selftest`` and the test suite.

Trial ``k`` of a run with seed ``s`` draws everything from
``np.random.default_rng([s, k])``, so any single trial can be replayed
without rerunning the ones before it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import instances as inst
from .errors import DegenerateInput
from .geometry import AnswerKind, AxisRect, Polygon, clearance
from .lcq import CircleSet, LcqArrangement, LcqTree
from .oracles import SimpleOracle, oracle_lcq, oracle_qmec_convex, oracle_qmec_points, oracle_qmer
from .qmec_convex import preprocess_convex, query_convex
from .qmec_points import preprocess_points, query_points
from .qmec_simple import preprocess_simple, query_simple
from .qmer import preprocess_qmer, query_qmer

MODES = ("lcq", "convex", "simple", "points", "rect")
DEFAULT_N = {"lcq": 64, "convex": 40, "simple": 30, "points": 32, "rect": 12}
QUERIES = {"lcq": 50, "convex": 20, "simple": 20, "points": 20, "rect": 20}
TOL = {"convex": 1e-6, "simple": 1e-4, "points": 1e-6}
CLEARANCE_TOL = 1e-7


@dataclass
class Mismatch:
    q: tuple
    detail: str


@dataclass
class TrialResult:
    mode: str
    seed: int
    trial: int
    n: int
    max_dev: float = 0.0
    mismatches: list = field(default_factory=list)
    bounds: dict = field(default_factory=dict)
    resampled: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def reproducer(self) -> str:
        q = self.mismatches[0].q if self.mismatches else None
        return f"reproduce: esq selftest --mode {self.mode} --seed {self.seed} --trial {self.trial} q={q}"


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def depth_bound(n: int) -> int:
    return math.ceil(math.log2(max(n, 1))) + 1


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# --- per-mode trials ---------------------------------------------------------------


def lcq_trial(seed: int, trial: int, n_max: int = 64, variant: str = "both") -> TrialResult:
    rng = trial_rng(seed, trial)
    n = int(rng.integers(1, n_max + 1))
    res = TrialResult("lcq", seed, trial, n)
    while True:
        circles = inst.random_circles(n, rng)
        try:
            cs = CircleSet(circles)
            break
        except DegenerateInput:
            res.resampled += 1
    tree = LcqTree(cs) if variant in ("tree", "both") else None
    sweep = LcqArrangement(cs) if variant in ("sweep", "both") else None
    for q in rng.uniform(-1.0, 11.0, (QUERIES["lcq"], 2)).tolist():
        want = oracle_lcq(circles, q).witness
        got = {}
        if tree is not None:
            r = tree.locate(q)
            got["tree"] = None if r is None else cs.ids[r]
        if sweep is not None:
            r = sweep.locate(q)
            got["sweep"] = None if r is None else cs.ids[r]
        bad = {k: v for k, v in got.items() if v != want}
        if bad:
            res.max_dev = 1.0
            res.mismatches.append(Mismatch(tuple(q), f"oracle id {want}, got {bad}"))
    if tree is not None:
        res.bounds = {"tree_depth": tree.depth, "depth_bound": depth_bound(n)}
        if tree.depth > depth_bound(n):
            res.mismatches.append(Mismatch(None, f"tree depth {tree.depth} > {depth_bound(n)}"))
    return res


def convex_trial(seed: int, trial: int, n_max: int = 40) -> TrialResult:
    rng = trial_rng(seed, trial)
    n = int(rng.integers(3, n_max + 1))
    poly = inst.random_convex(n, rng)
    return convex_check(poly, rng, TrialResult("convex", seed, trial, n))


def convex_check(poly: Polygon, rng, res: TrialResult) -> TrialResult:
    idx = preprocess_convex(poly)
    ct = idx.axis._locator.ct
    res.bounds = {"centroid_depth": ct.depth, "depth_bound": depth_bound(idx.axis.node_count())}
    qs = inst.sample_inside(poly, QUERIES["convex"] - 2, rng)
    x0, x1, y0, y1 = poly.bbox()
    qs += [(x1 + 1.0, y1 + 1.0), tuple(poly.vertices[0])]
    for q in qs:
        a, o = query_convex(idx, q), oracle_qmec_convex(poly, q)
        if a.kind is not o.kind:
            res.mismatches.append(Mismatch(tuple(q), f"kind {a.kind.value} vs oracle {o.kind.value}"))
            continue
        if o.kind is not AnswerKind.BOUNDED:
            continue
        dev = _rel(a.radius, o.radius)
        gap = abs(clearance(poly, a.circle.center) - a.radius)
        res.max_dev = max(res.max_dev, dev)
        if dev > TOL["convex"] or gap > CLEARANCE_TOL:
            res.mismatches.append(Mismatch(tuple(q), f"radius {a.radius!r} vs {o.radius!r}, clearance gap {gap:.3g}"))
    return res


def simple_trial(seed: int, trial: int, n_max: int = 30) -> TrialResult:
    """Random star-shaped polygon; near-degenerate draws are redrawn."""
    rng = trial_rng(seed, trial)
    resampled = 0
    while True:
        n = int(rng.integers(5, n_max + 1))
        poly = inst.random_simple(n, rng, spike=float(rng.uniform(0.2, 0.8)))
        try:
            idx = preprocess_simple(poly)
            break
        except DegenerateInput:
            resampled += 1
    res = TrialResult("simple", seed, trial, n, resampled=resampled)
    return simple_check(poly, rng, res, idx)


def simple_check(poly: Polygon, rng, res: TrialResult, idx=None) -> TrialResult:
    idx = idx if idx is not None else preprocess_simple(poly)
    oracle = SimpleOracle(poly)
    s_q = 0
    for q in inst.sample_inside(poly, QUERIES["simple"], rng):
        trace = {}
        a, o = query_simple(idx, q, trace), oracle.query(q)
        s_q = max(s_q, trace.get("S_q", 0))
        dev = _rel(a.radius, o.radius)
        res.max_dev = max(res.max_dev, dev)
        if dev > TOL["simple"]:
            res.mismatches.append(Mismatch(tuple(q), f"radius {a.radius!r} vs oracle {o.radius!r}"))
    res.bounds = {
        "S_r": idx.stats["max_guides_per_radius"],
        "S_q": s_q,
        "mountains": idx.stats["mountains"],
        "centroid_depth": idx.tree.depth,
        "depth_bound": depth_bound(idx.axis.node_count()),
    }
    return res


def points_trial(seed: int, trial: int, n_max: int = 32) -> TrialResult:
    rng = trial_rng(seed, trial)
    n = int(rng.integers(3, n_max + 1))
    pts = inst.random_points(n, rng)
    return points_check(pts, rng, TrialResult("points", seed, trial, n))


def points_check(pts, rng, res: TrialResult) -> TrialResult:
    idx = preprocess_points(pts)
    res.bounds = {
        "O_v": idx.stats["max_ov"],
        "lcq_depth": idx.stats["lcq_depth"],
        "depth_bound": depth_bound(len(idx.lcq.cs)),
    }
    P = np.asarray(pts, dtype=float)
    lo, hi = P.min(axis=0), P.max(axis=0)
    span = hi - lo
    qs = rng.uniform(lo - 0.1 * span, hi + 0.1 * span, (QUERIES["points"], 2)).tolist()
    qs.append(list(P[0]))  # a site is on or outside the hull, or interior but at a site
    for q in qs:
        a, o = query_points(idx, q), oracle_qmec_points(pts, q)
        if a.kind is not o.kind:
            res.mismatches.append(Mismatch(tuple(q), f"kind {a.kind.value} vs oracle {o.kind.value}"))
            continue
        if o.kind is AnswerKind.BOUNDED:
            dev = _rel(a.radius, o.radius)
            res.max_dev = max(res.max_dev, dev)
            if dev > TOL["points"]:
                res.mismatches.append(Mismatch(tuple(q), f"radius {a.radius!r} vs oracle {o.radius!r}"))
    return res


def rect_trial(seed: int, trial: int, n_max: int = 12) -> TrialResult:
    rng = trial_rng(seed, trial)
    n = int(rng.integers(0, n_max + 1))
    pts, region = inst.random_region_points(n, rng)
    return rect_check(pts, region, rng, TrialResult("rect", seed, trial, n))


def rect_check(pts, region: AxisRect, rng, res: TrialResult) -> TrialResult:
    idx = preprocess_qmer(pts, region)
    res.bounds = {"mers": len(idx.mers), "cells": idx.cell_count}
    qs = [tuple(q) for q in rng.uniform([region.xmin, region.ymin], [region.xmax, region.ymax],
                                        (QUERIES["rect"], 2)).tolist()]
    # grid lines and corners are where ties between cells are decided
    qs += [tuple(p) for p in pts[:2]] + [(region.xmin, region.ymin)]
    for q in qs:
        a, o = query_qmer(idx, q), oracle_qmer(pts, region, q)
        if a.rect != o.rect:
            res.max_dev = 1.0
            res.mismatches.append(Mismatch(tuple(q), f"{a.rect} vs oracle {o.rect}"))
    return res


def run_trial(mode: str, seed: int, trial: int, n_max: Optional[int] = None, lcq: str = "both") -> TrialResult:
    n_max = DEFAULT_N[mode] if n_max is None else n_max
    if mode == "lcq":
        return lcq_trial(seed, trial, n_max, lcq)
    return {"convex": convex_trial, "simple": simple_trial, "points": points_trial, "rect": rect_trial}[mode](
        seed, trial, n_max
    )
