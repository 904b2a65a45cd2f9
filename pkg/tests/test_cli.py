import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from conftest import BODIES, ROOT
from funkgeom.cli import fmt, main

DISK = str(BODIES / "disk.json")
SQUARE = str(BODIES / "square.json")
HALF = str(BODIES / "halfplane.json")
LOG2 = repr(math.log(2))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fmt():
    assert fmt(math.log(2)) == "0.693147180560"
    assert fmt(0.0) == "0"
    assert fmt(math.inf) == "inf"
    assert fmt(2.0) == "2.00000000000"


def test_dist_disk(capsys):
    code, out, _ = run(capsys, "dist", DISK, "--from", "0,0", "--to", "0.5,0")
    assert code == 0
    first, second = out.splitlines()
    assert first == "0.693147180560 / 0.405465108108"
    assert second.startswith("a+ = (1.00000000000, 0")


def test_dist_same_point(capsys):
    code, out, _ = run(capsys, "dist", DISK, "--from", "0.2,0.1", "--to", "0.2,0.1")
    assert code == 0 and out.splitlines()[0] == "0 / 0"


def test_dist_halfplane(capsys):
    code, out, _ = run(capsys, "dist", HALF, "--from", "0,2", "--to", "0,1")
    assert code == 0 and out.splitlines()[0] == "0.693147180560 / 0"


def test_dist_negative_coordinates(capsys):
    code, out, _ = run(capsys, "dist", DISK, "--from=-0.5,0", "--to", "0,0")
    assert code == 0 and out.startswith("0.405465108108 / 0.693147180560")


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "dist", DISK, "--from", "2,0", "--to", "0,0")[0] == 3
    assert run(capsys, "dist", DISK, "--from", "0,0", "--to", "0,0,0")[0] == 2
    assert run(capsys, "dist", str(tmp_path / "missing.json"), "--from", "0,0", "--to", "0,0")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"dimension": 2, "body": {"type": "blob"}}')
    assert run(capsys, "dist", str(bad), "--from", "0,0", "--to", "0,0")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["dist", DISK, "--from", "a,b", "--to", "0,0"])
    assert exc.value.code == 2
    out = tmp_path / "nodir" / "x.csv"
    assert run(capsys, "sphere", DISK, "--center", "0,0", "--delta", "1", "--format", "csv",
               "--out", str(out))[0] == 4


def test_gauge_and_length(capsys, tmp_path):
    assert run(capsys, "gauge", DISK, "--at", "0.5,0", "--vector", "1,0")[1] == "2.00000000000\n"
    assert run(capsys, "gauge", DISK, "--at", "0.5,0", "--vector", "0,0")[1] == "0\n"
    path = tmp_path / "p.json"
    path.write_text("[[0, 0], [0.25, 0], [0.5, 0]]")
    code, out, _ = run(capsys, "length", DISK, "--path", str(path))
    assert code == 0 and abs(float(out) - math.log(2)) <= 1e-6 * math.log(2)
    path.write_text('{"vertices": [[0, 0], [1.5, 0]]}')
    assert run(capsys, "length", DISK, "--path", str(path))[0] == 3


def test_sphere_csv_rows_on_circle(capsys):
    code, out, _ = run(capsys, "sphere", DISK, "--center", "0,0", "--delta", LOG2, "--side", "fwd",
                       "--format", "csv")
    assert code == 0
    rows = np.array(list(csv.reader(io.StringIO(out))), float)
    assert rows.shape == (720, 2)
    assert np.all(np.abs(np.linalg.norm(rows, axis=1) - 0.5) <= 1e-9)


def test_sphere_zero_radius(capsys):
    out = run(capsys, "sphere", DISK, "--center", "0.1,0.2", "--delta", "0", "--format", "csv")[1]
    assert set(out.splitlines()) == {"0.1,0.2"}


def test_sphere_json_and_backward(capsys):
    code, out, _ = run(capsys, "sphere", DISK, "--center", "0,0", "--delta", repr(math.log(2.5)),
                       "--side", "bwd", "--dirs", "16", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["side"] == "backward" and doc["truncated"] and doc["points"] == []
    doc = json.loads(run(capsys, "sphere", DISK, "--center", "0,0", "--delta", repr(math.log(1.5)),
                         "--side", "bwd", "--dirs", "16")[1])
    assert not doc["truncated"] and len(doc["points"]) == 16
    assert set(doc) == {"center", "delta", "side", "points", "truncated"}


def test_sphere_svg_golden(tmp_path, capsys):
    out = tmp_path / "s.svg"
    code = run(capsys, "sphere", SQUARE, "--center", "0.5,0.5", "--delta", LOG2, "--side", "fwd",
               "--dirs", "720", "--format", "svg", "--out", str(out))[0]
    assert code == 0
    golden = (ROOT / "tests" / "golden" / "square_fwd_log2.svg").read_bytes()
    assert out.read_bytes() == golden


def test_outputs_are_deterministic(tmp_path, capsys):
    for fmt_ in ("json", "csv"):
        a, b = tmp_path / f"a.{fmt_}", tmp_path / f"b.{fmt_}"
        for target in (a, b):
            run(capsys, "sphere", SQUARE, "--center", "0.3,0.6", "--delta", "0.7", "--format", fmt_,
                "--out", str(target))
        assert a.read_bytes() == b.read_bytes()


def test_ball_membership(capsys):
    code, out, _ = run(capsys, "ball", DISK, "--center", "0,0", "--delta", "1", "--point", "0.5,0")
    assert code == 0 and out.splitlines() == ["F(center, point) = 0.693147180560", "inside"]
    out = run(capsys, "ball", DISK, "--center", "0,0", "--delta", "0.5", "--point", "0.5,0")[1]
    assert out.splitlines()[1] == "outside"
    out = run(capsys, "ball", DISK, "--center", "0,0", "--delta", "0.5", "--point", "0.5,0",
              "--side", "bwd")[1]
    assert out.splitlines() == ["F(point, center) = 0.405465108108", "inside"]


def test_slice(capsys):
    cube = str(BODIES / "cube.json")
    code, out, _ = run(capsys, "slice", cube, "--base", "0.5,0.5,0.5", "--frame", "1,0,0",
                       "--frame", "0,1,0", "--from", "0,0", "--to", "0.25,0.1")
    assert code == 0
    sl, amb = out.splitlines()
    assert sl == "slice 0.693147180560" and amb == "ambient 0.693147180560"


def test_verify_square_geodesics(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code, out, _ = run(capsys, "verify", SQUARE, "--suite", "geodesics", "--samples", "2000", "--out", str(a))
    assert code == 0 and "geodesics/polygonal_geodesic_witness" in out
    run(capsys, "verify", SQUARE, "--suite", "geodesics", "--samples", "2000", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["passed"] and doc["seed"] == 0 and "wall_time" not in doc


def test_verify_ellipse_axioms_includes_strict_triangle(capsys):
    code, out, _ = run(capsys, "verify", str(BODIES / "ellipse.json"), "--suite", "axioms",
                       "--samples", "2000")
    assert code == 0 and "PASS  axioms/strict_triangle" in out


def test_verify_failure_exit_code(monkeypatch, capsys):
    import funkgeom.verify as verify

    monkeypatch.setitem(verify._RUNNERS, "axioms", lambda body, rng, n: [("always_fails", False, "x", 1)])
    assert run(capsys, "verify", DISK, "--suite", "axioms")[0] == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "funkgeom", "dist", DISK, "--from", "0,0", "--to", "0.5,0"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith("0.693147180560 / 0.405465108108")
