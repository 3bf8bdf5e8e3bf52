import json
import subprocess
import sys

import pytest

from steklov_heat.cli import SCHEMA, run
from steklov_heat.geometry import icosphere, write_off


def _run(argv, capsys):
    code = run(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_derive_n3(capsys):
    code, doc = _run(["derive", "--dim", "3", "--depth", "2", "--reproducible"], capsys)
    assert code == 0
    assert doc["schema"] == SCHEMA
    assert [e["match"] for e in doc["invariants"]] == [True, True, True]
    h1 = doc["invariants"][2]["regrouped"]["H1^2"]["coefficient"]
    assert (h1["rational"], h1["pi_power"]) == ("1/16", -1)
    assert "timestamp" not in doc and "wall_seconds" not in doc["invariants"][0]


def test_derive_n2_reports_zero_a1(capsys):
    code, doc = _run(["derive", "--dim", "2", "--depth", "1", "--reproducible"], capsys)
    assert code == 0
    a1 = doc["invariants"][1]
    assert a1["zero"] and a1["terms"] == [] and doc["gates"]["a1_vanishes_n2"]


def test_ball_n4(capsys):
    code, doc = _run(["ball", "--dim", "4", "--reproducible", "--max-level", "1000"], capsys)
    assert code == 0
    for got, want, tol in zip(doc["fit"]["fitted"], [2, 2, 1], [1e-6, 1e-4, 1e-3]):
        assert abs(got - want) <= tol


def test_weyl_n3(capsys):
    code, doc = _run(["weyl", "--dim", "3", "--reproducible"], capsys)
    assert code == 0 and doc["gates"]["weyl_bounded"]
    assert doc["max_abs_residual"] == pytest.approx(0.25)


def test_surface_generators(capsys):
    code, doc = _run(["surface", "--icosphere", "1", "3", "--reproducible"], capsys)
    assert code == 0 and doc["report"]["chi"] == 2
    code, doc = _run(["surface", "--torus", "2", "1", "24", "--reproducible"], capsys)
    assert code == 0 and doc["report"]["chi"] == 0


def test_surface_mesh_file_and_out(tmp_path, capsys):
    path = tmp_path / "s.off"
    write_off(icosphere(1.0, 2), path)
    out = tmp_path / "report.json"
    code = run(["surface", "--mesh", str(path), "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] and "timestamp" in doc


def test_reproducible_output_is_byte_identical(capsys):
    argv = ["surface", "--ellipsoid", "2", "1", "1", "3", "--reproducible"]
    run(argv)
    a = capsys.readouterr().out
    run(argv)
    b = capsys.readouterr().out
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        ["derive", "--dim", "3", "--depth", "3"],
        ["derive", "--dim", "2", "--depth", "2"],
        ["derive", "--dim", "9", "--depth", "1"],
        ["derive", "--dim", "3", "--experimental-raw-k3"],
        ["derive", "--dim", "3", "--bogus"],
        ["ball", "--dim", "3", "--grid-points", "4"],
        ["ball", "--dim", "3", "--grid-max", "0.5"],
        ["surface"],
        ["surface", "--icosphere", "1", "x"],
        ["surface", "--mesh", "/nonexistent/mesh.off"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    assert run(argv) == 1
    assert capsys.readouterr().out == ""


def test_unreadable_output_path(tmp_path, capsys):
    assert run(["weyl", "--dim", "3", "--max-level", "10", "--out", str(tmp_path / "no" / "x.json")]) == 1


def test_gate_failure_exits_two(monkeypatch, capsys):
    import steklov_heat.cli as cli

    monkeypatch.setattr(cli, "FIT_TOLERANCES", (0.0, 0.0, 0.0))
    code, doc = _run(["ball", "--dim", "3", "--max-level", "100", "--reproducible"], capsys)
    assert code == 2 and doc["passed"] is False


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "steklov_heat", "weyl", "--dim", "4", "--max-level", "900", "--reproducible"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert doc["gates"]["weyl_scaled_residual_decreasing"]
