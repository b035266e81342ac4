"""JSON instance, query and answer documents plus the benchmark CSV.

Grammar (all numbers are JSON numbers; keys may appear in any order)::

    instance := {"mode": "convex" | "simple" | "points" | "rect",
                 "coordinates": [[x, y], ...],
                 "region": [xmin, xmax, ymin, ymax],      # rect mode only, required there
                 "jitter_seed": int}                       # optional
    queries  := {"queries": [[x, y], ...]}
    answers  := {"mode": str, "answers": [answer, ...]}    # one per query, input order
    answer   := {"q": [x, y], "kind": "bounded",   "center": [x, y], "radius": r}
              | {"q": [x, y], "kind": "unbounded"}
              | {"q": [x, y], "kind": "rectangle", "rect": [xmin, xmax, ymin, ymax]}
              | {"q": [x, y], "kind": "null", "error": str}

Answer documents are written with sorted keys and ``repr`` floats, so equal
inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import astuple, dataclass, fields
from typing import Optional

from .geometry import AnswerKind, AxisRect, QueryAnswer

MODES = ("convex", "simple", "points", "rect")
CSV_HEADER = ["mode", "n", "seed", "build_ns", "mean_query_ns", "p99_query_ns", "queries", "depth"]


class FormatError(ValueError):
    """Malformed document (exit code 2)."""


@dataclass
class Instance:
    mode: str
    coordinates: list
    region: Optional[AxisRect] = None
    jitter_seed: Optional[int] = None


def _pairs(v, what: str) -> list:
    if not isinstance(v, list):
        raise FormatError(f"{what} must be a list of [x, y] pairs")
    out = []
    for k, p in enumerate(v):
        if not (isinstance(p, list) and len(p) == 2 and all(_is_num(c) for c in p)):
            raise FormatError(f"{what}[{k}] is not an [x, y] pair of numbers")
        out.append((float(p[0]), float(p[1])))
    return out


def _is_num(c) -> bool:
    return isinstance(c, (int, float)) and not isinstance(c, bool) and math.isfinite(c)


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None


def parse_instance(doc) -> Instance:
    if not isinstance(doc, dict):
        raise FormatError("instance document must be an object")
    unknown = set(doc) - {"mode", "coordinates", "region", "jitter_seed"}
    if unknown:
        raise FormatError(f"unknown instance keys: {sorted(unknown)}")
    mode = doc.get("mode")
    if mode not in MODES:
        raise FormatError(f"mode must be one of {list(MODES)}, got {mode!r}")
    if "coordinates" not in doc:
        raise FormatError("missing key 'coordinates'")
    coords = _pairs(doc["coordinates"], "coordinates")
    region = None
    if doc.get("region") is not None:
        r = doc["region"]
        if not (isinstance(r, list) and len(r) == 4 and all(_is_num(c) for c in r)):
            raise FormatError("region must be [xmin, xmax, ymin, ymax]")
        try:
            region = AxisRect(*map(float, r))
        except ValueError as exc:
            raise FormatError(str(exc)) from None
    if mode == "rect" and region is None:
        raise FormatError("rect mode needs a region")
    seed = doc.get("jitter_seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool) or seed < 0):
        raise FormatError("jitter_seed must be a non-negative integer")
    return Instance(mode, coords, region, seed)


def load_instance(path: str) -> Instance:
    return parse_instance(_load_json(path))


def load_queries(path: str) -> list:
    doc = _load_json(path)
    if not isinstance(doc, dict) or "queries" not in doc:
        raise FormatError("queries document must be an object with key 'queries'")
    return _pairs(doc["queries"], "queries")


def answer_record(q, a: Optional[QueryAnswer], error: Optional[str] = None) -> dict:
    rec = {"q": [float(q[0]), float(q[1])]}
    if a is None or a.kind is AnswerKind.NULL:
        rec["kind"] = "null"
        rec["error"] = error or "no answer"
    elif a.kind is AnswerKind.BOUNDED:
        rec.update(kind="bounded", center=[a.circle.center.x, a.circle.center.y], radius=a.circle.radius)
    elif a.kind is AnswerKind.UNBOUNDED:
        rec["kind"] = "unbounded"
    else:
        rec.update(kind="rectangle", rect=list(a.rect.as_tuple()))
    return rec


def dump_answers(mode: str, records: list) -> str:
    return json.dumps({"mode": mode, "answers": records}, sort_keys=True, indent=1) + "\n"


# --- benchmark records ---------------------------------------------------------------


@dataclass
class BenchRecord:
    mode: str
    n: int
    seed: int
    build_ns: int
    mean_query_ns: float
    p99_query_ns: float
    queries: int
    depth: int

    def __post_init__(self):
        if min(self.build_ns, self.mean_query_ns, self.p99_query_ns) < 0 or self.queries <= 0:
            raise ValueError(f"invalid bench record {self}")


def write_bench_csv(f, records) -> None:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([repr(v) if isinstance(v, float) else v for v in astuple(r)])


def read_bench_csv(f) -> list:
    rows = csv.reader(f)
    header = next(rows, None)
    if header != CSV_HEADER:
        raise FormatError(f"unexpected bench header {header}")
    types = [fl.type for fl in fields(BenchRecord)]
    conv = {"str": str, "int": int, "float": float}
    return [BenchRecord(*(conv[t](v) for t, v in zip(types, row))) for row in rows if row]
