import json
import os
import subprocess
import sys

import pytest

from peelkit.cli import main

SQUARE = {"vertices": [[0, 0], [3, 0], [3, 3], [0, 3]]}


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture(scope="module")
def peeled(tmp_path_factory):
    d = tmp_path_factory.mktemp("peel")
    src = write(d / "square.json", SQUARE)
    out = d / "dec.json"
    assert main(["peel", "--input", src, "--output", str(out)]) == 0
    return out


def test_peel_square(peeled):
    doc = json.loads(peeled.read_text())
    assert len(doc["pieces"]) > 1


def test_peel_point(tmp_path):
    src = write(tmp_path / "point.json", {"vertices": [[1, 2]]})
    out = tmp_path / "dec.json"
    assert main(["peel", "--input", src, "--output", str(out)]) == 0
    assert len(json.loads(out.read_text())["pieces"]) == 1


def test_peel_unbounded(tmp_path, capsys):
    src = write(tmp_path / "h.json", {"halfspaces": [{"normal": [1, 0], "offset": 1}]})
    assert main(["peel", "--input", src]) == 1
    assert "unbounded" in capsys.readouterr().err


def test_peel_malformed(tmp_path, capsys):
    src = write(tmp_path / "bad.json", {"vertices": [[0, 0], [1, "a"]]})
    assert main(["peel", "--input", src]) == 1
    assert "'vertices'" in capsys.readouterr().err
    (tmp_path / "broken.json").write_text("{")
    assert main(["peel", "--input", str(tmp_path / "broken.json")]) == 1


def test_certify_and_breach(peeled, tmp_path):
    out = tmp_path / "cert.json"
    assert main(["certify", "--input", str(peeled), "--output", str(out)]) == 0
    assert json.loads(out.read_text())["ok"] is True
    assert main(["certify", "--input", str(peeled), "--rho", "0.5", "--output", str(out)]) == 2
    assert json.loads(out.read_text())["piece_radii_ok"] is False


def test_render(peeled, tmp_path):
    out = tmp_path / "pic.svg"
    assert main(["render", "--input", str(peeled), "--output", str(out)]) == 0
    n = len(json.loads(peeled.read_text())["pieces"])
    assert out.read_text().count("<path") == n
    assert main(["render", "--input", str(peeled), "--format", "json", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["pieces"] == n


def test_render_3d_fails(tmp_path):
    src = write(tmp_path / "tet.json", {"vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]})
    dec = tmp_path / "dec.json"
    assert main(["peel", "--input", src, "--output", str(dec)]) == 0
    assert main(["render", "--input", str(dec)]) == 1
    assert main(["render", "--input", str(dec), "--format", "json", "--output", str(tmp_path / "s")]) == 0


def test_simulate_exit_codes(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert main(["simulate", "--n", "2", "--m", "6", "--nil-const", "2", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["contradiction"] is True
    assert main(["simulate", "--n", "2", "--m", "1", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["stages"] == []
    capsys.readouterr()
    assert main(["simulate", "--n", "1", "--m", "3"]) == 1
    assert "--n must be >= 2" in capsys.readouterr().err
    assert main(["simulate", "--n", "2", "--m", "6", "--initial-depth", "1", "--output", str(out)]) == 3
    assert "failed claim at stage 1" in capsys.readouterr().err


def test_expand(tmp_path):
    out = tmp_path / "e.json"
    assert main(["expand", "--n", "2", "--m", "3", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["brute"]["ok"] and doc["cross_check"]["ok"]
    assert main(["expand", "--n", "2", "--m", "6", "--term-cap", "10"]) == 1


def test_usage_errors(capsys):
    assert main([]) == 1
    assert main(["peel"]) == 1
    assert main(["simulate", "--n", "2", "--m", "3", "--nil-const", "2", "--nil-random", "3"]) == 1


def test_seed_from_environment(peeled, tmp_path, monkeypatch):
    a, b, c = (tmp_path / f"{x}.json" for x in "abc")
    assert main(["certify", "--input", str(peeled), "--samples", "500", "--seed", "7", "--output", str(a)]) == 0
    monkeypatch.setenv("PEELKIT_SEED", "7")
    assert main(["certify", "--input", str(peeled), "--samples", "500", "--output", str(b)]) == 0
    monkeypatch.setenv("PEELKIT_SEED", "nope")
    assert main(["certify", "--input", str(peeled), "--output", str(c)]) == 1
    assert a.read_bytes() == b.read_bytes()


def test_console_script_runs(tmp_path):
    env = dict(os.environ, PYTHONHASHSEED="1")
    res = subprocess.run([sys.executable, "-m", "peelkit.cli", "simulate", "--n", "2", "--m", "2"],
                         capture_output=True, text=True, env=env, cwd=tmp_path)
    assert res.returncode == 0
    assert json.loads(res.stdout)["contradiction"] is True
