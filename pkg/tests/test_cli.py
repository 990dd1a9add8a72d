import json

import pytest

from wangreduce.cli import main
from wangreduce.geometry import Polyform, write_poly
from wangreduce.wang import uniform_set


@pytest.fixture
def sample_file(tmp_path, sample):
    path = tmp_path / "sample.wang"
    path.write_text(sample.dumps())
    return str(path)


@pytest.fixture
def uniform_file(tmp_path):
    path = tmp_path / "uniform.wang"
    path.write_text(uniform_set(2).dumps())
    return str(path)


def test_blocks_verify(capsys):
    assert main(["blocks", "verify"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") > 30


def test_compile(tmp_path, sample_file):
    out = tmp_path / "tiles"
    assert main(["compile", sample_file, "--dim", "3", "--out", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert "encoder.poly" in names and "linker_U.layout" in names and len(names) == 8


def test_compile_4d_p1_is_usage_error(tmp_path):
    path = tmp_path / "p1.wang"
    path.write_text(uniform_set(1).dumps())
    assert main(["compile", str(path), "--dim", "4", "--out", str(tmp_path / "o")]) == 2


def test_missing_file_is_usage_error(tmp_path):
    assert main(["compile", str(tmp_path / "nope.wang")]) == 2


def test_bad_arguments_are_usage_errors():
    assert main(["compile"]) == 2
    assert main(["frobnicate"]) == 2


def test_wang_solve(sample_file, tmp_path):
    out = tmp_path / "a.json"
    assert main(["wang", "solve", sample_file, "--out", str(out)]) == 0
    assert json.loads(out.read_text()) == {"a": 1, "b": 3, "grid": [[0, 2, 1]]}
    assert main(["wang", "solve", sample_file, "--torus", "2x2"]) == 1


def test_tiling_build_verify_tamper(tmp_path, uniform_file, capsys):
    cert = tmp_path / "c" / "cert.txt"
    assert main(["tiling", "build", uniform_file, "--out", str(cert)]) == 0
    assert main(["tiling", "verify", str(cert)]) == 0
    assert main(["tiling", "check-lattice", str(cert)]) == 0
    lines = cert.read_text().splitlines()
    n = next(i for i, line in enumerate(lines) if line.startswith("linker_"))
    flipped = "linker_D" if lines[n].startswith("linker_U") else "linker_U"
    lines[n] = flipped + lines[n][len("linker_U"):]
    bad = tmp_path / "c" / "bad.txt"
    bad.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    assert main(["tiling", "verify", str(bad)]) == 1
    assert "violation" in capsys.readouterr().out


def test_tiling_build_with_assignment(tmp_path, sample_file):
    a = tmp_path / "a.json"
    a.write_text(json.dumps({"a": 1, "b": 3, "grid": [[0, 1, 2]]}))
    assert main(["tiling", "build", sample_file, "--assignment", str(a), "--out", str(tmp_path / "c.txt")]) == 1


def test_tiling_4d(tmp_path, uniform_file):
    cert = tmp_path / "c4.txt"
    assert main(["tiling", "build", uniform_file, "--dim", "4", "--out", str(cert)]) == 0
    assert main(["tiling", "verify", str(cert)]) == 0
    assert main(["tiling", "check-lattice", str(cert)]) == 0


def test_solve(tmp_path, capsys):
    tiles = tmp_path / "tiles"
    tiles.mkdir()
    write_poly(Polyform.box((1, 2)), tiles / "v.poly")
    write_poly(Polyform.box((2, 1)), tiles / "h.poly")
    assert main(["solve", "--tiles", str(tiles), "--region", "2x3", "--mode", "count"]) == 0
    assert capsys.readouterr().out.startswith("count 3")
    assert main(["solve", "--tiles", str(tiles), "--region", "3x3"]) == 1
    assert main(["solve", "--tiles", str(tiles), "--region", "6x6", "--mode", "count", "--budget", "3"]) == 1
    assert "budget-exhausted" in capsys.readouterr().out
    lat = tmp_path / "lat.txt"
    lat.write_text("4 0\n0 2\n")
    assert main(["solve", "--tiles", str(tiles), "--lattice", str(lat)]) == 0
    assert main(["solve", "--tiles", str(tmp_path), "--region", "2x2"]) == 2


def test_render(tmp_path, sample_file, capsys):
    assert main(["render", "1", "--block", "X"]) == 0
    assert capsys.readouterr().out.startswith("layer 1")
    svg = tmp_path / "e.svg"
    assert main(["render", "2", "--wang", sample_file, "--tile", "encoder", "--svg", "--out", str(svg)]) == 0
    assert svg.read_text().startswith("<svg")
    assert main(["render", "2", "--wang", sample_file, "--dim", "4", "--tile", "linker"]) == 0
    assert main(["render", "2", "--wang", sample_file, "--tile", "nope"]) == 2
    assert main(["render", "1"]) == 2
    assert main(["render", "1", "--block", "zz"]) == 2


def test_outputs_are_reproducible(tmp_path, uniform_file):
    a, b = tmp_path / "a" / "c.txt", tmp_path / "b" / "c.txt"
    main(["tiling", "build", uniform_file, "--out", str(a)])
    main(["tiling", "build", uniform_file, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    assert (a.parent / "tiles" / "encoder.poly").read_bytes() == (b.parent / "tiles" / "encoder.poly").read_bytes()
