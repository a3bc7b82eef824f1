import json

import pytest

from flagmirror.cli import main
from flagmirror.parallel import ENV_THREADS, thread_count
from flagmirror.serialize import dumps, series_from_json, series_to_json


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def p1(tmp_path):
    return write(tmp_path / "p1.json", {"r": [1], "n": 2})


@pytest.fixture
def p1_equivariant(tmp_path):
    return write(tmp_path / "p1e.json", {"r": [1], "n": 2, "equivariant": True})


def run(*argv):
    return main([str(a) for a in argv])


def test_compute_is_byte_identical(tmp_path, p1):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("compute", "--constructor", "grassmann_i", "--setup", p1, "--dmax", 2, "--out", a) == 0
    assert run("compute", "--constructor", "grassmann_i", "--setup", p1, "--dmax", 2, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["schema"] == "fm/1" and len(doc["setup_hash"]) == 64


def test_thread_count_does_not_change_output(tmp_path, p1_equivariant, monkeypatch):
    outs = []
    for n in ("1", "4"):
        monkeypatch.setenv(ENV_THREADS, n)
        assert thread_count() == int(n)
        out = tmp_path / f"t{n}.json"
        assert run("compute", "--constructor", "main_flag_i", "--setup", p1_equivariant, "--dmax", 2,
                   "--out", out) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_round_trip(tmp_path, p1_equivariant):
    out = tmp_path / "brown.json"
    assert run("compute", "--constructor", "brown_i", "--setup", p1_equivariant, "--dmax", 2, "--out", out) == 0
    doc = json.loads(out.read_text())
    F = series_from_json(doc)
    again = series_to_json(F, doc["setup"], doc["constructor"], doc.get("args"))
    assert dumps(again) == out.read_text()


def test_compare_equal_and_different(tmp_path, p1):
    a, b, c = (tmp_path / f"{x}.json" for x in "abc")
    run("compute", "--constructor", "grassmann_i", "--setup", p1, "--dmax", 2, "--zwin", -10, 0, "--out", a)
    run("compute", "--constructor", "qde_small_j", "--setup", p1, "--dmax", 2, "--zwin", -10, 0, "--out", b)
    assert run("compare", a, b, "--out", c) == 0
    assert json.loads(c.read_text())["equal"] is True
    doc = json.loads(b.read_text())
    doc["entries"] = [e for e in doc["entries"] if e["degree"] != "B()K(2)"]
    b.write_text(json.dumps(doc))
    assert run("compare", a, b, "--out", c) == 1
    assert json.loads(c.read_text())["diff"][0]["degree"] == "B()K(2)"


def test_verify_brown_series(tmp_path, p1_equivariant):
    out, rep = tmp_path / "b.json", tmp_path / "r.json"
    run("compute", "--constructor", "brown_i", "--setup", p1_equivariant, "--dmax", 2, "--out", out)
    assert run("verify", "--input", out, "--setup", p1_equivariant, "--out", rep) == 0
    report = json.loads(rep.read_text())
    assert report["passed"] and [r["check"] for r in report["reports"]] == ["divisor", "weyl", "C1", "C2", "C3"]


def test_usage_errors(tmp_path, p1):
    assert run("compute", "--constructor", "nope", "--setup", p1) == 2
    bad = write(tmp_path / "bad.json", {"r": [3], "n": 2})
    assert run("compute", "--constructor", "grassmann_i", "--setup", bad) == 2
    assert run("compute", "--constructor", "grassmann_i", "--setup", tmp_path / "missing.json") == 2
    with pytest.raises(SystemExit) as exc:
        run("compute", "--setup", p1)
    assert exc.value.code == 2


def test_window_overflow(tmp_path, p1, capsys):
    assert run("compute", "--constructor", "grassmann_i", "--setup", p1, "--zwin", -8, -1) == 3
    assert "overflow" in capsys.readouterr().err.lower()


def test_window_drop_below_is_flagged(tmp_path, p1):
    out = tmp_path / "t.json"
    assert run("compute", "--constructor", "grassmann_i", "--setup", p1, "--dmax", 2, "--zwin", -3, 0,
               "--out", out) == 0
    assert json.loads(out.read_text())["truncation"]["truncated_below"] is True


def test_provenance_mismatch(tmp_path, p1, p1_equivariant):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("compute", "--constructor", "grassmann_i", "--setup", p1, "--dmax", 1, "--out", a)
    other = write(tmp_path / "p2.json", {"r": [1], "n": 3})
    run("compute", "--constructor", "grassmann_i", "--setup", other, "--dmax", 1, "--out", b)
    assert run("compare", a, b) == 4
    assert run("compare", a, b, "--force") == 1
    assert run("verify", "--input", a, "--checks", "divisor", "--setup", other) == 4
