import json
import math

import pytest

from hopf4d.cli import main
from hopf4d.scene import read_scene


def run(args):
    return main(args)


def test_fiber_happy_path(tmp_path):
    out = tmp_path / "scene.json"
    assert run(["fiber", "--phi", "0.3", "--psi", "1.2", "--out", str(out)]) == 0
    doc = read_scene(out.read_bytes())
    assert doc.by_id("fiber-xi").vertices.shape[0] == 256


def test_degenerate_torus_exit_code(tmp_path):
    out = tmp_path / "t.json"
    assert run(["torus", "--mode", "kappa", "--psi", "0", "--out", str(out)]) == 2
    assert not out.exists()


def test_usage_error_exit_code(tmp_path, capsys):
    assert run(["fiber", "--phi", "0.3", "--out", str(tmp_path / "x.json")]) == 1
    assert run(["unknown-subcommand"]) == 1


def test_torus_mode_requires_matching_angle(tmp_path):
    out = tmp_path / "t.json"
    assert run(["torus", "--mode", "kappa", "--out", str(out)]) == 1
    assert run(["torus", "--mode", "mu", "--out", str(out)]) == 1


def test_modulation_counts(tmp_path):
    out = tmp_path / "c.json"
    assert run(["modulation", "--poly", "tetrakis_hexahedron", "--m", "8", "--out", str(out)]) == 0
    doc = read_scene(out.read_bytes())
    assert doc.by_id("constellation-xi").vertices.shape[0] == 112


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["nested", "--family", "xy", "--count", "12", "--grid", "24x24"]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_export_flow(tmp_path):
    scene_path = tmp_path / "t.json"
    obj_path = tmp_path / "t.obj"
    assert run(
        ["torus", "--mode", "kappa", "--psi", "1.2", "--grid", "16x16", "--out", str(scene_path)]
    ) == 0
    assert run(
        ["export", "--in", str(scene_path), "--space", "xi", "--format", "obj", "--out", str(obj_path)]
    ) == 0
    text = obj_path.read_text()
    assert sum(1 for l in text.split("\n") if l.startswith("v ")) == 256
    assert sum(1 for l in text.split("\n") if l.startswith("f ")) == 256


def test_export_missing_input(tmp_path):
    assert run(
        ["export", "--in", str(tmp_path / "absent.json"), "--space", "xi", "--out", str(tmp_path / "o.obj")]
    ) == 1


def test_lift_from_csv(tmp_path):
    curve = tmp_path / "curve.csv"
    rows = ["# phi,psi"] + [f"{2 * math.pi * j / 16},{1.0}" for j in range(16)]
    curve.write_text("\n".join(rows) + "\n")
    out = tmp_path / "lift.json"
    assert run(["lift", "--curve", str(curve), "--n-beta", "16", "--out", str(out)]) == 0
    doc = read_scene(out.read_bytes())
    assert doc.by_id("lift-stereo").kind == "mesh"


def test_arcs_from_json(tmp_path):
    spec = tmp_path / "arcs.json"
    spec.write_text(
        json.dumps(
            [{"center": [0.0, 0.0], "radius": 2.0, "theta0": 0.0, "theta1": 2 * math.pi}]
        )
    )
    out = tmp_path / "arcs.json.scene"
    assert run(
        ["arcs", "--spec", str(spec), "--samples-per-arc", "8", "--n-beta", "12", "--out", str(out)]
    ) == 0


def test_packing_scene(tmp_path):
    out = tmp_path / "p.json"
    assert run(["packing", "--poly", "tetrahedron", "--samples", "32", "--out", str(out)]) == 0
    doc = read_scene(out.read_bytes())
    assert len([o for o in doc.objects if o.id.endswith("-disk")]) == 4


def test_verify_single_suite(tmp_path, capsys):
    assert run(["verify", "--suite", "unit-norm", "--report-dir", ""]) == 0
    captured = capsys.readouterr()
    assert "[PASS] unit-norm" in captured.out


def test_verify_writes_report(tmp_path, capsys):
    report = tmp_path / "report"
    assert run(["verify", "--suite", "torus", "--report-dir", str(report)]) == 0
    assert (report / "verify_results.csv").exists()
    assert (report / "fiber_images.png").exists()
