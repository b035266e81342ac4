"""Largest-circle queries: which of a set of circles is the largest one containing q.

Two interchangeable structures are provided.  ``LcqTree`` splits the circles
(sorted by decreasing radius) into a balanced binary tree whose nodes answer
"is q in the union of my circles" through a power diagram; a query descends
left whenever the larger half already covers q.  ``LcqArrangement`` sweeps the
arrangement of circle arcs from left to right and tags every face with the
largest circle covering it, so a query is two binary searches.

Both return the circle of largest radius containing q, with equal radii going
to the smaller id.
"""
from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DegenerateInput, IdenticalCircles
from .geometry import EPS_GEOM, Circle, Point, QueryAnswer, circle_contains
from .power import PowerMembership

# Event abscissae closer than this (relative to the set's extent) are one batch.
EVENT_MERGE = 1e-12


class CircleSet:
    """Circles with stable integer ids, kept in non-increasing radius order.

    ``rank`` k refers to position k of that order, so a smaller rank means a
    larger circle (or an equal radius with a smaller id).
    """

    def __init__(self, circles: Iterable, ids: Optional[Sequence[int]] = None, validate: bool = True):
        circles = [c if isinstance(c, Circle) else Circle(Point(*c[0]), float(c[1])) for c in circles]
        if ids is None:
            ids = list(range(len(circles)))
        if len(ids) != len(circles):
            raise ValueError("ids and circles differ in length")
        if len(set(ids)) != len(ids):
            raise ValueError("circle ids must be unique")
        order = sorted(range(len(circles)), key=lambda k: (-circles[k].radius, ids[k]))
        self.circles = [circles[k] for k in order]
        self.ids = [ids[k] for k in order]
        self.centers = np.array([c.center for c in self.circles], dtype=float).reshape(-1, 2)
        self.radii = np.array([c.radius for c in self.circles], dtype=float)
        if validate:
            self.validate()

    def __len__(self):
        return len(self.circles)

    def __iter__(self):
        return iter(zip(self.ids, self.circles))

    def validate(self, eps: float = None):
        """Reject identical circles and points shared by three circles."""
        eps = EPS_GEOM if eps is None else eps
        n = len(self)
        if n < 2:
            return
        c, r = self.centers, self.radii
        i, j = np.triu_indices(n, 1)
        dx = c[j, 0] - c[i, 0]
        dy = c[j, 1] - c[i, 1]
        d = np.hypot(dx, dy)
        same = (d <= eps) & (np.abs(r[i] - r[j]) <= eps)
        if same.any():
            k = int(np.argmax(same))
            raise IdenticalCircles(f"circles {self.ids[i[k]]} and {self.ids[j[k]]} coincide")
        if n < 3:
            return
        pts, owners = _pair_intersections(c, r, i, j, d, dx, dy, eps)
        if not len(pts):
            return
        # a third circle through any pairwise intersection point
        gap = np.abs(np.hypot(pts[:, None, 0] - c[None, :, 0], pts[:, None, 1] - c[None, :, 1]) - r[None, :])
        on = gap <= eps
        on[np.arange(len(pts)), owners[:, 0]] = False
        on[np.arange(len(pts)), owners[:, 1]] = False
        if on.any():
            p, k = np.argwhere(on)[0]
            a, b = owners[p]
            raise DegenerateInput(
                f"circles {self.ids[a]}, {self.ids[b]} and {self.ids[k]} share the point "
                f"({pts[p, 0]:.12g}, {pts[p, 1]:.12g})"
            )

    def scan(self, q, eps: float = None) -> Optional[int]:
        """Rank of the largest circle containing q by direct evaluation."""
        if not len(self):
            return None
        eps = EPS_GEOM if eps is None else eps
        d = np.hypot(self.centers[:, 0] - q[0], self.centers[:, 1] - q[1])
        hit = np.nonzero(d <= self.radii + eps)[0]
        return int(hit[0]) if len(hit) else None

    def answer(self, rank: Optional[int]) -> QueryAnswer:
        if rank is None:
            return QueryAnswer.null()
        return QueryAnswer.bounded(self.circles[rank], witness=self.ids[rank])


def _pair_intersections(c, r, i, j, d, dx, dy, eps):
    """Intersection points of the circle pairs (i, j); tangencies give one point."""
    ok = (d > eps) & (d <= r[i] + r[j] + eps) & (d >= np.abs(r[i] - r[j]) - eps)
    i, j, d, dx, dy = i[ok], j[ok], d[ok], dx[ok], dy[ok]
    if not len(i):
        return np.empty((0, 2)), np.empty((0, 2), dtype=int)
    a = (r[i] ** 2 - r[j] ** 2 + d * d) / (2.0 * d)
    h = np.sqrt(np.maximum(r[i] ** 2 - a * a, 0.0))
    ux, uy = dx / d, dy / d
    mx, my = c[i, 0] + a * ux, c[i, 1] + a * uy
    p1 = np.column_stack([mx - h * uy, my + h * ux])
    p2 = np.column_stack([mx + h * uy, my - h * ux])
    two = h > 0.0
    pts = np.concatenate([p1, p2[two]])
    owners = np.concatenate([np.column_stack([i, j]), np.column_stack([i[two], j[two]])])
    return pts, owners


# --- divide and conquer tree -------------------------------------------------


@dataclass
class _Node:
    lo: int
    hi: int
    member: PowerMembership
    rmax: float
    left: Optional["_Node"] = None
    right: Optional["_Node"] = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


class LcqTree:
    """Balanced tree over rank ranges; the left child holds the larger circles."""

    def __init__(self, cs: CircleSet):
        self.cs = cs
        self.root = self._build(0, len(cs)) if len(cs) else None

    def _build(self, lo: int, hi: int) -> _Node:
        cs = self.cs
        node = _Node(lo, hi, PowerMembership(cs.centers[lo:hi], cs.radii[lo:hi]), float(cs.radii[lo]))
        if hi - lo > 1:
            mid = lo + (hi - lo + 1) // 2
            node.left = self._build(lo, mid)
            node.right = self._build(mid, hi)
        return node

    @property
    def depth(self) -> int:
        def walk(v):
            return 0 if v is None else 1 + max(walk(v.left), walk(v.right))

        return walk(self.root)

    def covers(self, node: _Node, q, eps: float = None) -> bool:
        """Closed-disk membership of q in the union of the node's circles."""
        eps = EPS_GEOM if eps is None else eps
        k, pw = node.member.owner_power(q[0], q[1])
        if pw <= 0.0:
            return True
        if pw > 2.0 * node.rmax * eps + eps * eps + 1e-15:
            return False
        # within the eps band another circle may be the closed-disk container
        cs = self.cs
        c, r = cs.centers[node.lo:node.hi], cs.radii[node.lo:node.hi]
        return bool((np.hypot(c[:, 0] - q[0], c[:, 1] - q[1]) <= r + eps).any())

    def locate(self, q, trace: Optional[list] = None) -> Optional[int]:
        """Rank of the largest circle containing q, or None."""
        v = self.root
        if v is None or not self.covers(v, q):
            return None
        while not v.is_leaf:
            if trace is not None:
                trace.append(v)
            v = v.left if self.covers(v.left, q) else v.right
        return v.lo

    def query(self, q) -> QueryAnswer:
        return self.cs.answer(self.locate(q))


def build_lcq_tree(cs: CircleSet) -> LcqTree:
    return LcqTree(cs)


def query_lcq_tree(t: LcqTree, q) -> QueryAnswer:
    return t.query(q)


# --- sweep over the arrangement ------------------------------------------------
#
# Arc 2k is the lower half of circle k (crossing it upward enters the circle),
# arc 2k + 1 the upper half.  Every slab between consecutive event abscissae
# stores the bottom-to-top arc order and, for each of the m + 1 gaps, the rank
# of the largest circle covering it (``n`` stands for none).


@dataclass
class _Slab:
    arcs: list
    ids: list


@dataclass
class LcqArrangement:
    cs: CircleSet
    xs: list = field(default_factory=list)
    slabs: list = field(default_factory=list)

    def __post_init__(self):
        cs = self.cs
        n = len(cs)
        self._cx = cs.centers[:, 0].tolist()
        self._cy = cs.centers[:, 1].tolist()
        self._r = cs.radii.tolist()
        self._extreme = sorted(
            [(self._cx[k] - self._r[k], k) for k in range(n)] + [(self._cx[k] + self._r[k], k) for k in range(n)]
        )
        self._extreme_x = [e[0] for e in self._extreme]
        self.full_rebuilds = 0
        if n:
            self._sweep()

    # arc geometry
    def arc_y(self, a: int, x: float) -> float:
        k = a >> 1
        dx = x - self._cx[k]
        h = self._r[k] * self._r[k] - dx * dx
        h = math.sqrt(h) if h > 0.0 else 0.0
        return self._cy[k] + h if a & 1 else self._cy[k] - h

    def _events(self):
        cs = self.cs
        n = len(cs)
        ev = []
        for k in range(n):
            ev.append((self._cx[k] - self._r[k], 0, k, -1, self._cy[k]))
            ev.append((self._cx[k] + self._r[k], 2, k, -1, self._cy[k]))
        if n > 1:
            c, r = cs.centers, cs.radii
            i, j = np.triu_indices(n, 1)
            dx = c[j, 0] - c[i, 0]
            dy = c[j, 1] - c[i, 1]
            pts, owners = _pair_intersections(c, r, i, j, np.hypot(dx, dy), dx, dy, 0.0)
            for (x, y), (a, b) in zip(pts.tolist(), owners.tolist()):
                ev.append((x, 1, a, b, y))
        ev.sort()
        span = max(1.0, max(abs(e[0]) for e in ev))
        batches = []
        for e in ev:
            if batches and e[0] - batches[-1][-1][0] <= EVENT_MERGE * span:
                batches[-1].append(e)
            else:
                batches.append([e])
        return batches

    def _sweep(self):
        n = len(self.cs)
        batches = self._events()
        arcs: list = []
        ids: list = [n]
        for b, batch in enumerate(batches):
            x = batch[0][0]
            nxt = batches[b + 1][0][0] if b + 1 < len(batches) else x + 1.0
            mid = 0.5 * (x + nxt)
            done = len(batch) == 1 and self._apply(batch[0], arcs, ids, mid)
            if not done:
                arcs, ids = self._rebuild(mid)
                self.full_rebuilds += 1
            self.xs.append(x)
            self.slabs.append(_Slab(list(arcs), list(ids)))

    def _apply(self, ev, arcs, ids, mid) -> bool:
        """Update arcs/ids in place for a single event; False asks for a rebuild."""
        x, kind, k, k2, y = ev
        if kind == 0:
            lo, hi = 0, len(arcs)
            while lo < hi:
                m = (lo + hi) // 2
                if self.arc_y(arcs[m], x) < y:
                    lo = m + 1
                else:
                    hi = m
            g = ids[lo]
            arcs[lo:lo] = [2 * k, 2 * k + 1]
            ids[lo:lo + 1] = [g, min(g, k), g]
            return True
        if kind == 2:
            try:
                p = arcs.index(2 * k)
            except ValueError:
                return False
            if p + 1 >= len(arcs) or arcs[p + 1] != 2 * k + 1 or ids[p] != ids[p + 2]:
                return False
            del arcs[p:p + 2]
            del ids[p + 1:p + 3]
            return True
        sides = []
        for c in (k, k2):
            off = y - self._cy[c]
            if abs(off) <= 1e-7 * self._r[c]:
                return False
            sides.append(2 * c + (1 if off > 0 else 0))
        try:
            pa, pb = arcs.index(sides[0]), arcs.index(sides[1])
        except ValueError:
            return False
        if abs(pa - pb) != 1:
            return False
        p = min(pa, pb)
        lo_arc, hi_arc = arcs[p], arcs[p + 1]
        if self.arc_y(lo_arc, mid) <= self.arc_y(hi_arc, mid):
            return True  # tangency: order unchanged
        arcs[p], arcs[p + 1] = hi_arc, lo_arc
        below, above = ids[p], ids[p + 2]
        # new middle gap = gap below, then crossing hi_arc upward
        if not hi_arc & 1:
            ids[p + 1] = min(below, hi_arc >> 1)
        elif lo_arc & 1:
            ids[p + 1] = min(above, lo_arc >> 1)
        elif below != hi_arc >> 1:
            ids[p + 1] = below
        else:
            ids[p + 1] = self._gap_id(arcs, p + 1)
        return True

    def _gap_id(self, arcs, gap) -> int:
        inside = set()
        for a in arcs[:gap]:
            if a & 1:
                inside.discard(a >> 1)
            else:
                inside.add(a >> 1)
        return min(inside, default=len(self.cs))

    def _rebuild(self, x):
        n = len(self.cs)
        c, r = self.cs.centers, self.cs.radii
        dx = x - c[:, 0]
        live = np.nonzero(np.abs(dx) < r)[0]
        h = np.sqrt(r[live] ** 2 - dx[live] ** 2)
        ys = np.concatenate([c[live, 1] - h, c[live, 1] + h])
        arc_ids = np.concatenate([2 * live, 2 * live + 1])
        order = np.lexsort((arc_ids, ys))
        arcs = arc_ids[order].tolist()
        ids = [n]
        heap: list = []
        gone = set()
        for a in arcs:
            k = a >> 1
            if a & 1:
                gone.add(k)
            else:
                heapq.heappush(heap, k)
            while heap and heap[0] in gone:
                gone.discard(heapq.heappop(heap))
            ids.append(heap[0] if heap else n)
        return arcs, ids

    # queries
    def locate(self, q, eps: float = None) -> Optional[int]:
        eps = EPS_GEOM if eps is None else eps
        n = len(self.cs)
        qx, qy = float(q[0]), float(q[1])
        best = n
        s = bisect.bisect_right(self.xs, qx) - 1
        if s >= 0:
            slab = self.slabs[s]
            arcs = slab.arcs
            lo, hi = 0, len(arcs)
            while lo < hi:
                m = (lo + hi) // 2
                if self.arc_y(arcs[m], qx) <= qy:
                    lo = m + 1
                else:
                    hi = m
            best = slab.ids[lo]
            # closed-disk rule: circles whose boundary passes next to q
            for p in range(max(0, lo - 2), min(len(arcs), lo + 2)):
                k = arcs[p] >> 1
                if k < best and circle_contains(self.cs.circles[k], (qx, qy), eps):
                    best = k
        a = bisect.bisect_left(self._extreme_x, qx - eps)
        b = bisect.bisect_right(self._extreme_x, qx + eps)
        for _, k in self._extreme[a:b]:
            if k < best and circle_contains(self.cs.circles[k], (qx, qy), eps):
                best = k
        return None if best == n else best

    def query(self, q) -> QueryAnswer:
        return self.cs.answer(self.locate(q))

    def face_count(self) -> int:
        """Number of faces of the arrangement, the unbounded face included."""
        parent = {}

        def find(u):
            while parent.setdefault(u, u) != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        def bounds(s, x):
            arcs = self.slabs[s].arcs
            ys = [self.arc_y(a, x) for a in arcs]
            return [-math.inf] + ys, ys + [math.inf]

        find((-1, 0))
        if not self.slabs:
            return 1
        span = max(1.0, max(abs(v) for v in self.xs))
        tol = 1e-9 * span
        for s in range(len(self.slabs)):
            for g in range(len(self.slabs[s].ids)):
                find((s, g))
            x = self.xs[s]
            if s == 0:
                lo0, hi0 = [-math.inf], [math.inf]
            else:
                lo0, hi0 = bounds(s - 1, x)
            lo1, hi1 = bounds(s, x)
            i = j = 0
            while i < len(lo0) and j < len(lo1):
                if min(hi0[i], hi1[j]) - max(lo0[i], lo1[j]) > tol:
                    parent[find((s - 1, i) if s else (-1, 0))] = find((s, j))
                if hi0[i] < hi1[j]:
                    i += 1
                else:
                    j += 1
        return len({find(u) for u in list(parent)})


def build_lcq_arrangement(cs: CircleSet) -> LcqArrangement:
    return LcqArrangement(cs)


def query_lcq_arrangement(a: LcqArrangement, q) -> QueryAnswer:
    return a.query(q)
