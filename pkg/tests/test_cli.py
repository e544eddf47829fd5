import json
import math

import pytest

from minlab import cli
from minlab.config import RunConfig
from minlab.errors import ArgumentError


def run(args):
    return cli.main(args)


def test_config_roundtrip():
    cfg = RunConfig(kind="enneper", order=2, radius=12.5, target_h=0.125,
                    radii_list=(1.0, 3.5, 7.25), alphas=(0.8, 0.5), seed=99)
    text = cfg.dumps()
    back = RunConfig.loads(text)
    assert back == cfg
    assert back.dumps() == text


def test_config_rejects_unknown_keys():
    with pytest.raises(ArgumentError):
        RunConfig.loads("[surface]\nwhat = 1\n")


def test_config_rejects_bad_values():
    with pytest.raises(ArgumentError):
        RunConfig(radius=-1.0)
    cfg = RunConfig(radius=4.0, radii_list=(8.0,))
    with pytest.raises(ArgumentError):
        cfg.radii()


def test_cmd_mesh_writes_file(tmp_path, capsys):
    out = tmp_path / "m"
    code = run(["mesh", "--surface", "plane", "--radius", "4", "--target-h", "0.1",
                "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "euler_characteristic: 1" in text
    assert (out / "mesh.txt").exists()
    header = (out / "mesh.txt").read_text().splitlines()[0]
    assert header == "minlab-mesh v1 plane 1 0"


def test_cmd_mesh_catenoid_periodic(tmp_path, capsys):
    code = run(["mesh", "--surface", "catenoid", "--radius", "8", "--target-h", "0.1",
                "--out", str(tmp_path / "c")])
    assert code == 0
    assert "periodic_v: true" in capsys.readouterr().out


def test_cmd_mesh_resource_cap(tmp_path, capsys):
    code = run(["mesh", "--surface", "plane", "--radius", "50", "--target-h", "0.01",
                "--vertex-cap", "1000", "--out", str(tmp_path / "x")])
    assert code == 3
    assert "cap" in capsys.readouterr().err


def test_cmd_certify_plane_passes(tmp_path):
    out = tmp_path / "p"
    code = run(["certify", "--surface", "plane", "--radius", "8", "--target-h", "0.06",
                "--field-kind", "coordinate", "--field-name", "x1",
                "--radii", "1", "2", "4", "--out", str(out)])
    assert code == 0
    data = json.loads((out / "certify.json").read_text())
    assert data["results"]["all_pass"] is True
    ratios = data["results"]["curve"]["ratios"]
    assert all(abs(q - 0.5) < 0.03 for q in ratios)


def test_cmd_certify_constant_field_degenerate(tmp_path, capsys):
    # x3 on the plane is identically zero
    code = run(["certify", "--surface", "plane", "--radius", "8", "--target-h", "0.08",
                "--field-kind", "coordinate", "--field-name", "x3",
                "--radii", "1", "2", "--out", str(tmp_path / "d")])
    assert code == 4


def test_cmd_report_missing_inputs(tmp_path, capsys):
    code = run(["report", "--out", str(tmp_path / "empty")])
    assert code == 2


def test_cmd_solve_and_growth_fit(tmp_path, capsys):
    out = tmp_path / "s"
    code = run(["solve", "--surface", "enneper", "--order", "1", "--radius", "4",
                "--target-h", "0.06", "--boundary", "x3", "--solve-radius", "2",
                "--out", str(out)])
    assert code == 0
    assert (out / "field.txt").exists()
    code = run(["growth-fit", "--surface", "enneper", "--order", "1", "--radius", "16",
                "--target-h", "0.1", "--field-kind", "coordinate", "--field-name", "x3",
                "--radii", "2", "4", "8", "16", "--out", str(out)])
    assert code == 0
    data = json.loads((out / "growth_fit.json").read_text())
    assert data["results"]["preferred"] == "power"


def test_cmd_area_growth_and_report(tmp_path, capsys):
    out = tmp_path / "r"
    code = run(["area-growth", "--surface", "plane", "--radius", "8",
                "--target-h", "0.05", "--radii", "2", "4", "8", "--out", str(out)])
    assert code == 0
    data = json.loads((out / "area_growth.json").read_text())
    assert data["results"]["area_constant"] == pytest.approx(math.pi, rel=0.02)
    capsys.readouterr()
    code = run(["report", "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "C_a" in text and "reference" in text
    assert (out / "summary.csv").exists()


def test_cmd_nodal(tmp_path, capsys):
    out = tmp_path / "n"
    code = run(["nodal", "--surface", "plane", "--radius", "2", "--target-h", "0.05",
                "--field-kind", "coordinate", "--field-name", "x1", "--out", str(out)])
    assert code == 0
    data = json.loads((out / "nodal.json").read_text())
    # nodal set of x1 on the triangulated B_2.2-covering patch: one diameter
    rho = 1.1 * 2.0
    assert data["results"]["length"] == pytest.approx(2 * rho, rel=0.02)


def test_cmd_cone_profile(tmp_path):
    out = tmp_path / "cp"
    code = run(["cone-profile", "--surface", "enneper", "--order", "1",
                "--radius", "20", "--target-h", "0.5", "--alphas", "0.8", "0.5",
                "--out", str(out)])
    assert code == 0
    data = json.loads((out / "cone_profile.json").read_text())
    assert set(data["results"]["profiles"]) == {"0.8", "0.5"}


def test_cmd_osc_decay_csv(tmp_path):
    out = tmp_path / "od"
    code = run(["osc-decay", "--surface", "plane", "--radius", "8", "--target-h",
                "0.06", "--field-kind", "coordinate", "--field-name", "x1",
                "--radii", "1", "2", "4", "8", "--out", str(out)])
    assert code == 0
    lines = (out / "osc_decay.csv").read_text().strip().splitlines()
    assert lines[0] == "radius,osc0,osc2,ratio,gamma"
    assert len(lines) == 5


def test_determinism_byte_identical_reports(tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        code = run(["certify", "--surface", "enneper", "--order", "1", "--radius", "4",
                    "--target-h", "0.08", "--field-kind", "dirichlet",
                    "--boundary", "random", "--seed", "7", "--solve-radius", "2",
                    "--radii", "0.5", "1", "--out", str(out)])
        assert code == 0
        outs.append((out / "certify.json").read_bytes())
    assert outs[0] == outs[1]


def test_env_var_overrides_out_dir(tmp_path, monkeypatch, capsys):
    target = tmp_path / "envdir"
    monkeypatch.setenv("MINLAB_DIR", str(target))
    code = run(["mesh", "--surface", "plane", "--radius", "2", "--target-h", "0.2",
                "--out", str(tmp_path / "ignored")])
    assert code == 0
    assert (target / "mesh.txt").exists()


def test_mesh_file_reuse(tmp_path, capsys):
    out = tmp_path / "mf"
    run(["mesh", "--surface", "enneper", "--order", "1", "--radius", "4",
         "--target-h", "0.08", "--out", str(out)])
    code = run(["area-growth", "--mesh-file", str(out / "mesh.txt"),
                "--radii", "1", "2", "4", "--radius", "4", "--out", str(out)])
    assert code == 0


def test_config_file_driving(tmp_path):
    cfg = RunConfig(kind="plane", radius=8.0, target_h=0.06, field_kind="coordinate",
                    field_name="x1", radii_list=(1.0, 2.0, 4.0), out_dir=str(tmp_path / "c"))
    path = tmp_path / "run.cfg"
    cfg.dump(path)
    code = run(["osc-decay", "--config", str(path)])
    assert code == 0
    assert (tmp_path / "c" / "osc_decay.json").exists()
    code = run(["osc-decay", "--config", str(tmp_path / "nope.cfg")])
    assert code == 2


def test_cmd_holder(tmp_path):
    out = tmp_path / "h"
    code = run(["holder", "--surface", "plane", "--radius", "8", "--target-h", "0.08",
                "--field-kind", "coordinate", "--field-name", "x1",
                "--holder-radius", "4", "--scales", "1", "2",
                "--pair-samples", "4096", "--out", str(out)])
    assert code == 0
    data = json.loads((out / "holder.json").read_text())
    assert data["results"]["alpha"] == pytest.approx(1.0, abs=0.1)


def test_shipped_configs_load_and_run(tmp_path, monkeypatch):
    from pathlib import Path

    config_dir = Path(__file__).resolve().parent.parent / "configs"
    paths = sorted(config_dir.glob("*.cfg"))
    assert len(paths) >= 10
    for path in paths:
        cfg = RunConfig.load(path)
        assert RunConfig.loads(cfg.dumps()) == cfg
    # drive one end to end
    monkeypatch.setenv("MINLAB_DIR", str(tmp_path / "cfgrun"))
    code = run(["certify", "--config", str(config_dir / "certify_plane_x1.cfg")])
    assert code == 0
