import io
import json
import math
import subprocess
import sys

import pytest

from esq.cli import EXIT_DEGENERATE, EXIT_IO, EXIT_MISMATCH, EXIT_OK, main
from esq.formats import BenchRecord, FormatError, parse_instance, read_bench_csv, write_bench_csv

SQUARE = {"mode": "convex", "coordinates": [[0, 0], [1, 0], [1, 1], [0, 1]]}
JSQUARE = {"mode": "points", "coordinates": [[0, 0], [1.0000001, 0], [1, 1.0000002], [0, 0.9999999]]}


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)
    return _write


def _query(write, tmp_path, inst, qs, name="a.json"):
    out = tmp_path / name
    code = main(["query", "--instance", write("i.json", inst), "--queries", write("q.json", {"queries": qs}),
                 "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_query_square(write, tmp_path):
    code, doc = _query(write, tmp_path, SQUARE, [[2, 2], [0.5, 0.5], [0.1, 0.1]])
    assert code == EXIT_OK and doc["mode"] == "convex"
    a = doc["answers"]
    assert a[0] == {"q": [2.0, 2.0], "kind": "unbounded"}
    assert a[1]["kind"] == "bounded" and a[1]["radius"] == pytest.approx(0.5)
    assert a[2]["radius"] == pytest.approx(0.1 * (2 + math.sqrt(2)))


def test_query_points_jittered_square(write, tmp_path):
    code, doc = _query(write, tmp_path, JSQUARE, [[0.5, 0.5]])
    assert code == EXIT_OK
    assert doc["answers"][0]["radius"] == pytest.approx(0.70711, abs=1e-5)


def test_query_exact_square_needs_jitter(write, tmp_path, capsys):
    exact = dict(JSQUARE, coordinates=[[0, 0], [1, 0], [1, 1], [0, 1]])
    code, _ = _query(write, tmp_path, exact, [[0.5, 0.5]])
    assert code == EXIT_DEGENERATE
    assert "DegenerateInput" in capsys.readouterr().err
    code, doc = _query(write, tmp_path, dict(exact, jitter_seed=1), [[0.5, 0.5]], "b.json")
    assert code == EXIT_OK
    assert doc["answers"][0]["radius"] == pytest.approx(0.70711, abs=1e-5)


def test_query_rect(write, tmp_path):
    inst = {"mode": "rect", "coordinates": [[0.3, 0.4]], "region": [0, 1, 0, 1]}
    code, doc = _query(write, tmp_path, inst, [[0.8, 0.8], [5, 5]])
    assert code == EXIT_OK
    assert doc["answers"][0] == {"q": [0.8, 0.8], "kind": "rectangle", "rect": [0.3, 1.0, 0.0, 1.0]}
    assert doc["answers"][1]["kind"] == "null" and doc["answers"][1]["error"]


def test_query_deterministic(write, tmp_path):
    inst = {"mode": "points", "coordinates": [[0, 0], [4, 0.3], [1.2, 3.1], [2.5, 1.4], [3.3, 2.8]]}
    qs = [[1.5, 1.0], [2.0, 2.0], [9, 9]]
    _query(write, tmp_path, inst, qs, "x.json")
    _query(write, tmp_path, inst, qs, "y.json")
    assert (tmp_path / "x.json").read_bytes() == (tmp_path / "y.json").read_bytes()


@pytest.mark.parametrize("doc", [
    "{not json",
    {"mode": "hexagon", "coordinates": []},
    {"mode": "convex"},
    {"mode": "convex", "coordinates": [[0, 0], [1]]},
    {"mode": "rect", "coordinates": [[0.5, 0.5]]},
    {"mode": "convex", "coordinates": [[0, 0]], "colour": "red"},
    {"mode": "points", "coordinates": [[0, 0]], "jitter_seed": -1},
])
def test_parse_errors_exit_2(write, tmp_path, doc):
    code, _ = _query(write, tmp_path, doc, [[0, 0]])
    assert code == EXIT_IO


def test_missing_files_and_bad_args(tmp_path):
    assert main(["query", "--instance", str(tmp_path / "nope.json"), "--queries", "x"]) == EXIT_IO
    assert main(["frobnicate"]) == EXIT_IO
    assert main(["selftest"]) == EXIT_IO


@pytest.mark.parametrize("doc", [
    {"mode": "convex", "coordinates": [[0, 0], [4, 0], [4, 4], [2, 1], [0, 4]]},
    {"mode": "simple", "coordinates": [[0, 0], [4, 0], [4, 4], [2, -1], [0, 4]]},
    {"mode": "points", "coordinates": [[0, 0], [1, 1], [2, 2]]},
    {"mode": "rect", "coordinates": [[0.5, 0.5], [0.5, 0.7]], "region": [0, 1, 0, 1]},
])
def test_invalid_geometry_exit_3(write, tmp_path, doc):
    code, _ = _query(write, tmp_path, doc, [[0.5, 0.5]])
    assert code == EXIT_DEGENERATE


def test_selftest_modes(capsys):
    assert main(["selftest", "--mode", "points", "--n", "32", "--trials", "15"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "O_v=" in out and "15/15 trials ok" in out
    assert main(["selftest", "--mode", "lcq", "--trials", "15"]) == EXIT_OK
    assert "tree_depth=" in capsys.readouterr().out
    assert main(["selftest", "--mode", "rect", "--trials", "5", "--trial", "3"]) == EXIT_OK
    assert "1/1 trials ok" in capsys.readouterr().out


def test_selftest_degenerate_simple(write):
    # symmetric dart: the two reflex-side corners tie exactly
    dart = write("d.json", {"mode": "simple", "coordinates": [[0, 0], [4, 0], [4, 4], [2, 1], [0, 4]]})
    assert main(["selftest", "--instance", dart]) == EXIT_DEGENERATE


def test_selftest_instance(write, capsys):
    path = write("s.json", SQUARE)
    assert main(["selftest", "--instance", path, "--trials", "3"]) == EXIT_OK
    assert "3/3 trials ok" in capsys.readouterr().out


def test_selftest_reports_mismatch(monkeypatch, capsys):
    from esq import harness

    def broken(q, *a, **k):
        ans = real(q, *a, **k)
        return ans.__class__.unbounded()

    real = harness.query_points
    monkeypatch.setattr(harness, "query_points", broken)
    assert main(["selftest", "--mode", "points", "--trials", "2", "--seed", "5"]) == EXIT_MISMATCH
    out = capsys.readouterr().out
    assert "reproduce: esq selftest --mode points --seed 5 --trial 0" in out


def test_bench_csv_round_trip(tmp_path, capsys):
    path = tmp_path / "b.csv"
    code = main(["bench", "--mode", "convex", "--n", "16,32", "--count", "20", "--repeat", "2", "--csv", str(path)])
    assert code == EXIT_OK
    text = path.read_text()
    assert text.splitlines()[0] == "mode,n,seed,build_ns,mean_query_ns,p99_query_ns,queries,depth"
    recs = read_bench_csv(io.StringIO(text))
    assert [r.n for r in recs] == [16, 32] and all(r.queries == 20 for r in recs)
    buf = io.StringIO()
    write_bench_csv(buf, recs)
    assert buf.getvalue() == text
    assert main(["bench", "--mode", "lcq", "--lcq", "both", "--n", "8", "--count", "5", "--repeat", "1"]) == EXIT_OK
    modes = [r.mode for r in read_bench_csv(io.StringIO(capsys.readouterr().out))]
    assert modes == ["lcq-tree", "lcq-sweep"]


def test_bench_bad_output_path(tmp_path):
    code = main(["bench", "--mode", "rect", "--n", "4", "--count", "5", "--repeat", "1",
                 "--csv", str(tmp_path / "missing" / "b.csv")])
    assert code == EXIT_IO


def test_bench_record_validation():
    with pytest.raises(ValueError):
        BenchRecord("convex", 8, 0, -1, 1.0, 1.0, 5, 3)
    with pytest.raises(ValueError):
        BenchRecord("convex", 8, 0, 1, 1.0, 1.0, 0, 3)
    with pytest.raises(FormatError):
        read_bench_csv(io.StringIO("a,b\n"))


def test_render_square(write, tmp_path):
    svg = tmp_path / "s.svg"
    code = main(["render", "--instance", write("i.json", SQUARE), "--queries",
                 write("q.json", {"queries": [[0.3, 0.6]]}), "--svg", str(svg)])
    assert code == EXIT_OK
    text = svg.read_text()
    assert text.startswith("<svg") or text.startswith("<?xml")
    assert text.count("<circle") == 1


def test_render_voronoi_and_empty_queries(write, tmp_path):
    pts = {"mode": "points", "coordinates": [[0, 0], [4, 0.3], [1.2, 3.1], [2.5, 1.4], [3.3, 2.8]]}
    svg = tmp_path / "v.svg"
    code = main(["render", "--instance", write("p.json", pts), "--queries", write("q.json", {"queries": []}),
                 "--svg", str(svg), "--overlay", "voronoi"])
    assert code == EXIT_OK
    text = svg.read_text()
    assert 'class="voronoi"' in text and "<circle" not in text
    plain = tmp_path / "n.svg"
    assert main(["render", "--instance", write("p2.json", pts), "--svg", str(plain)]) == EXIT_OK
    assert 'class="voronoi"' not in plain.read_text()


def test_parse_instance_fields():
    ins = parse_instance({"mode": "rect", "coordinates": [[0.5, 0.5]], "region": [0, 1, 0, 2], "jitter_seed": 3})
    assert ins.region.ymax == 2.0 and ins.jitter_seed == 3


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "esq", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "selftest" in r.stdout
