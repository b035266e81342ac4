"""Largest empty axis-parallel rectangle containing q.

Lines through every point cut the region into a grid whose cells are never
split by a maximal empty rectangle (MER).  Processing the MERs from the
largest down, each claims the cells it covers that nobody claimed yet, so a
query is a cell lookup.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, OutsideRegion
from .geometry import AxisRect, QueryAnswer


def rank_key(r: AxisRect):
    """Larger area first; equal areas fall back to the sides, lexicographically."""
    return (-r.area, r.xmin, r.ymin, r.xmax, r.ymax)


def _validate(points, region: AxisRect) -> np.ndarray:
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    for x, y in P.tolist():
        if not region.contains((x, y), strict=True):
            raise DegenerateInput(f"point ({x:.12g}, {y:.12g}) is not strictly inside the region")
    for axis, name in ((0, "x"), (1, "y")):
        v = np.sort(P[:, axis])
        if len(v) > 1 and np.any(np.diff(v) <= 0.0):
            k = int(np.argmax(np.diff(v) <= 0.0))
            raise DegenerateInput(f"two points share the {name} coordinate {v[k]:.12g}")
    return P


def enumerate_mers(points, region: AxisRect) -> list:
    """All maximal empty rectangles, by staircase sweeps.

    For a point p as left support, walk the points to its right: every point
    inside the current vertical gap closes a rectangle and then narrows the
    gap on its side of p.  Rectangles whose left side is the region wall are
    found by the mirrored walk from each right support, keeping only the one
    that reaches the wall, plus the full-width slabs between consecutive y's.
    """
    P = _validate(points, region)
    if not len(P):
        return [region]
    order = np.argsort(P[:, 0], kind="stable")
    xs, ys = P[order, 0].tolist(), P[order, 1].tolist()
    n = len(xs)
    out = []
    for i in range(n):
        lo, hi = region.ymin, region.ymax
        for j in range(i + 1, n):
            y = ys[j]
            if lo < y < hi:
                out.append(AxisRect(xs[i], xs[j], lo, hi))
                if y > ys[i]:
                    hi = y
                else:
                    lo = y
        out.append(AxisRect(xs[i], region.xmax, lo, hi))
    for j in range(n):
        lo, hi = region.ymin, region.ymax
        for i in range(j - 1, -1, -1):
            y = ys[i]
            if lo < y < hi:
                if y > ys[j]:
                    hi = y
                else:
                    lo = y
        out.append(AxisRect(region.xmin, xs[j], lo, hi))
    yl = [region.ymin] + sorted(ys) + [region.ymax]
    out.extend(AxisRect(region.xmin, region.xmax, a, b) for a, b in zip(yl, yl[1:]))
    return out


@dataclass
class MerIndex:
    region: AxisRect
    xs: list  # grid lines, region sides included
    ys: list
    mers: list  # by rank_key
    cell: np.ndarray  # (len(xs) - 1, len(ys) - 1) -> index into mers

    @property
    def cell_count(self) -> int:
        return int(self.cell.size)


class _ColumnSets:
    """Unclaimed rows per grid column with report-and-delete.

    Each column keeps a "next unclaimed row" forest with path halving, so a
    range report costs O(reported + 1) amortised per column.
    """

    def __init__(self, cols: int, rows: int):
        self.rows = rows
        self.nxt = [list(range(rows + 1)) for _ in range(cols)]
        self.left = [rows] * cols

    def _find(self, f, r):
        while f[r] != r:
            f[r] = f[f[r]]
            r = f[r]
        return r

    def take(self, c: int, r0: int, r1: int) -> list:
        f = self.nxt[c]
        got = []
        r = self._find(f, r0)
        while r < r1:
            got.append(r)
            f[r] = r + 1
            r = self._find(f, r + 1)
        self.left[c] -= len(got)
        return got


def preprocess_qmer(points, region: AxisRect) -> MerIndex:
    P = _validate(points, region)
    mers = sorted(enumerate_mers(P.tolist(), region), key=rank_key)
    xs = [region.xmin] + sorted(P[:, 0].tolist()) + [region.xmax]
    ys = [region.ymin] + sorted(P[:, 1].tolist()) + [region.ymax]
    xi = {x: k for k, x in enumerate(xs)}
    yi = {y: k for k, y in enumerate(ys)}
    cols, rows = len(xs) - 1, len(ys) - 1
    cell = np.full((cols, rows), -1, dtype=np.int64)
    free = _ColumnSets(cols, rows)
    remaining = cols * rows
    for m, r in enumerate(mers):
        c0, c1, r0, r1 = xi[r.xmin], xi[r.xmax], yi[r.ymin], yi[r.ymax]
        for c in range(c0, c1):
            if free.left[c]:
                got = free.take(c, r0, r1)
                cell[c, got] = m
                remaining -= len(got)
        if not remaining:
            break
    if remaining:
        raise AssertionError(f"{remaining} grid cells lie in no maximal empty rectangle")
    return MerIndex(region, xs, ys, mers, cell)


def _span(lines: list, v: float) -> list:
    """Grid intervals whose closure holds v (two when v is on an inner line)."""
    k = bisect.bisect_right(lines, v) - 1
    last = len(lines) - 2
    if k > last:
        return [last]
    if lines[k] == v and 0 < k:
        return [k - 1, k] if k <= last else [k - 1]
    return [k]


def query_qmer(idx: MerIndex, q) -> QueryAnswer:
    x, y = float(q[0]), float(q[1])
    if not idx.region.contains((x, y)):
        raise OutsideRegion(f"({x:.12g}, {y:.12g}) is outside the region")
    best = min(int(idx.cell[c, r]) for c in _span(idx.xs, x) for r in _span(idx.ys, y))
    return QueryAnswer.rectangle(idx.mers[best], witness=best)
