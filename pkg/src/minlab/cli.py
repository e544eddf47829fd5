"""Command-line front end.

Subcommands: mesh, solve, area-growth, osc-decay, certify, growth-fit,
holder, nodal, cone-profile, report.  Flags mirror the RunConfig fields;
``--config`` loads a config file first and explicit flags override it.
``MINLAB_DIR`` overrides the output directory.

Exit codes: 0 success, 2 missing input, 3 resource cap, 4 degenerate
input, 5 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, harmonic, mesh as mesh_mod, surfaces
from .config import RunConfig
from .errors import (
    ArgumentError,
    DegenerateError,
    MinlabError,
    MissingInputError,
    NumericalError,
    RangeError,
    ResourceError,
)
from .harmonic import ScalarField
from .rng import SplitMix64

GROWTH_REFERENCES = {
    ("enneper", "x3"): ("2/3", 2.0 / 3.0),
    ("enneper", "u"): ("1/3", 1.0 / 3.0),
    ("enneper", "v"): ("1/3", 1.0 / 3.0),
    ("plane", "x1"): ("1", 1.0),
    ("plane", "x2"): ("1", 1.0),
    ("helicoid", "u"): ("log", None),
    ("catenoid", "x3"): ("log", None),
}
AREA_REFERENCES = {
    "plane": ("plane pi", math.pi),
    "enneper": ("3pi", 3.0 * math.pi),
    "helicoid": ("cubic", None),
}


def _out_dir(cfg: RunConfig) -> Path:
    path = Path(os.environ.get("MINLAB_DIR", cfg.out_dir))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")


def _build_mesh(cfg: RunConfig, args) -> mesh_mod.SurfaceMesh:
    mesh_file = getattr(args, "mesh_file", None)
    if mesh_file:
        if not Path(mesh_file).exists():
            raise MissingInputError(f"mesh file not found: {mesh_file}")
        return mesh_mod.load_mesh(mesh_file)
    spec = surfaces.ImmersionSpec(cfg.kind, cfg.order)
    if cfg.param_radius > 0:
        return mesh_mod.triangulate(spec, cfg.param_radius, cfg.target_h, cfg.vertex_cap)
    return mesh_mod.build_patch(spec, cfg.radius, cfg.target_h, cfg.vertex_cap)


def _named_values(mesh, name: str, seed: int) -> np.ndarray:
    if name in ("x1", "x2", "x3"):
        return mesh.positions[:, int(name[1]) - 1].copy()
    if name in ("u", "v"):
        return mesh.params[:, 0 if name == "u" else 1].copy()
    if name == "random":
        gen = SplitMix64(seed)
        coeffs = [(gen.uniform_signed(), gen.uniform_signed()) for _ in range(6)]
        theta = np.arctan2(mesh.params[:, 1], mesh.params[:, 0])
        vals = np.zeros(mesh.n_vertices)
        for m, (a, b) in enumerate(coeffs, start=1):
            vals += a * np.cos(m * theta) + b * np.sin(m * theta)
        return vals
    raise ArgumentError(f"unknown field/boundary name {name!r}")


def _build_field(cfg: RunConfig, mesh, args) -> ScalarField:
    field_file = getattr(args, "field_file", None)
    if field_file:
        if not Path(field_file).exists():
            raise MissingInputError(f"field file not found: {field_file}")
        return harmonic.load_field(mesh, field_file)
    if cfg.field_kind == "coordinate":
        return ScalarField(mesh, _named_values(mesh, cfg.field_name, cfg.seed))
    if cfg.field_kind == "parameter":
        return ScalarField.from_parameter(mesh, cfg.field_name)
    if cfg.field_kind == "dirichlet":
        r_solve = cfg.solve_radius if cfg.solve_radius > 0 else cfg.radius / 2.0
        comp = mesh_mod.ball_component(mesh, mesh.origin_vertex, r_solve)
        data = _named_values(mesh, cfg.boundary, cfg.seed)
        return harmonic.solve_dirichlet(comp, data[comp.boundary_vertices])
    raise ArgumentError(f"unknown field kind {cfg.field_kind!r}")


def _surface_meta(cfg: RunConfig) -> dict:
    return {"kind": cfg.kind, "order": cfg.order, "target_h": cfg.target_h,
            "radius": cfg.radius}


def _measured_area_constant(cfg: RunConfig, mesh) -> float:
    if cfg.area_constant > 0:
        return cfg.area_constant
    radii = cfg.radii()
    areas = [
        mesh_mod.ball_component(mesh, mesh.origin_vertex, r).area() for r in radii
    ]
    return max(a / r**2 for a, r in zip(areas, radii))


# ---------------------------------------------------------------------------
# subcommands


def cmd_mesh(cfg: RunConfig, args) -> int:
    mesh = _build_mesh(cfg, args)
    out = _out_dir(cfg)
    path = out / "mesh.txt"
    mesh_mod.save_mesh(mesh, path)
    print(f"vertices: {mesh.n_vertices}")
    print(f"triangles: {mesh.n_triangles}")
    print(f"euler_characteristic: {mesh.euler_characteristic()}")
    print(f"periodic_v: {str(mesh.periodic_v).lower()}")
    print(f"max_conformal_defect: {mesh.max_conformal_defect():.3e}")
    print(f"max_minimality_defect: {mesh.max_minimality_defect():.3e}")
    print(f"wrote {path}")
    return 0


def cmd_solve(cfg: RunConfig, args) -> int:
    mesh = _build_mesh(cfg, args)
    cfg_dirichlet = RunConfig(**{**_cfg_dict(cfg), "field_kind": "dirichlet"})
    field = _build_field(cfg_dirichlet, mesh, args)
    out = _out_dir(cfg)
    harmonic.save_field(field, out / "field.txt")
    interior = field.domain.interior_vertices
    print(f"solved {len(interior)} interior vertices")
    print(f"wrote {out / 'field.txt'}")
    return 0


def cmd_area_growth(cfg: RunConfig, args) -> int:
    mesh = _build_mesh(cfg, args)
    radii = cfg.radii()
    root = mesh.origin_vertex
    areas = [mesh_mod.ball_component(mesh, root, r).area() for r in radii]
    c_a, exponent = mesh_mod.area_growth_fit(mesh, root, radii)
    payload = {
        "command": "area-growth",
        "surface": _surface_meta(cfg),
        "results": {
            "radii": radii,
            "areas": areas,
            "normalized": [a / (math.pi * r * r) for a, r in zip(areas, radii)],
            "area_constant": c_a,
            "exponent": exponent,
        },
    }
    out = _out_dir(cfg)
    _write_json(out / "area_growth.json", payload)
    print(f"area_constant: {c_a:.6g}  exponent: {exponent:.4f}")
    return 0


def cmd_osc_decay(cfg: RunConfig, args) -> int:
    mesh = _build_mesh(cfg, args)
    field = _build_field(cfg, mesh, args)
    c_a = _measured_area_constant(cfg, mesh)
    bound = analysis.liouville_threshold(c_a)
    curve = analysis.decay_curve(field, mesh.origin_vertex, cfg.radii(), bound)
    payload = {
        "command": "osc-decay",
        "surface": _surface_meta(cfg),
        "field": cfg.field_name if cfg.field_kind != "dirichlet" else cfg.boundary,
        "results": curve.to_dict() | {"area_constant": c_a},
    }
    out = _out_dir(cfg)
    _write_json(out / "osc_decay.json", payload)
    with open(out / "osc_decay.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["radius", "osc0", "osc2", "ratio", "gamma"])
        writer.writerows(curve.csv_rows())
    print(f"ratios: {[round(float(x), 4) for x in curve.ratios]}")
    return 0


def cmd_certify(cfg: RunConfig, args) -> int:
    mesh = _build_mesh(cfg, args)
    field = _build_field(cfg, mesh, args)
    c_a = _measured_area_constant(cfg, mesh)
    bound = analysis.liouville_threshold(c_a)
    root = mesh.origin_vertex
    radii = cfg.radii()
    curve = analysis.decay_curve(field, root, radii, bound)
    certs = []
    for r in radii:
        if 2.0 * r > cfg.radius:
            continue
        certs.append(analysis.decay_certificate(field, root, r, c_a))
    all_pass = not curve.exceeded.any() and all(c.passed for c in certs)
    payload = {
        "command": "certify",
        "surface": _surface_meta(cfg),
        "results": {
            "area_constant": c_a,
            "curve": curve.to_dict(),
            "certificates": [c.to_dict() for c in certs],
            "all_pass": bool(all_pass),
        },
    }
    out = _out_dir(cfg)
    _write_json(out / "certify.json", payload)
    for c in certs:
        print(
            f"r={c.radius:g}: energy {c.energy:.4g} <= {c.energy_bound:.4g} "
            f"[{'ok' if c.pass_energy else 'FAIL'}], sup {c.sup_log:.4g} <= "
            f"{c.sup_log_bound:.4g} [{'ok' if c.pass_sup else 'FAIL'}], "
            f"levels {c.level_length_min:.4g} >= {c.level_length_bound:.4g} "
            f"[{'ok' if c.pass_levels else 'FAIL'}]"
        )
    return 0 if all_pass else 5


def cmd_growth_fit(cfg: RunConfig, args) -> int:
    mesh = _build_mesh(cfg, args)
    field = _build_field(cfg, mesh, args)
    fit = analysis.growth_exponent(field, mesh.origin_vertex, cfg.radii())
    name = cfg.field_name if cfg.field_kind != "dirichlet" else cfg.boundary
    payload = {
        "command": "growth-fit",
        "surface": _surface_meta(cfg),
        "field": name,
        "results": fit.to_dict(),
    }
    out = _out_dir(cfg)
    _write_json(out / "growth_fit.json", payload)
    print(f"alpha: {fit.alpha:.4f}  preferred: {fit.preferred}")
    return 0


def cmd_holder(cfg: RunConfig, args) -> int:
    mesh = _build_mesh(cfg, args)
    field = _build_field(cfg, mesh, args)
    r = cfg.holder_radius if cfg.holder_radius > 0 else cfg.radius / 2.0
    scales = list(cfg.scales) or [r / 8.0, r / 4.0, r / 2.0]
    fit = analysis.holder_estimate(field, r, scales, cfg.pair_samples, cfg.seed)
    payload = {
        "command": "holder",
        "surface": _surface_meta(cfg),
        "results": fit.to_dict(),
    }
    out = _out_dir(cfg)
    _write_json(out / "holder.json", payload)
    print(f"alpha: {fit.alpha:.4f}  C: {fit.c_fit:.4g}")
    return 0


def cmd_nodal(cfg: RunConfig, args) -> int:
    mesh = _build_mesh(cfg, args)
    field = _build_field(cfg, mesh, args)
    subset = mesh.whole()
    length = harmonic.nodal_length(field, subset)
    payload = {
        "command": "nodal",
        "surface": _surface_meta(cfg),
        "results": {"length": length},
    }
    out = _out_dir(cfg)
    _write_json(out / "nodal.json", payload)
    print(f"nodal length: {length:.6g}")
    return 0


def cmd_cone_profile(cfg: RunConfig, args) -> int:
    mesh = _build_mesh(cfg, args)
    profiles = {repr(a): analysis.cone_containment_profile(mesh, a) for a in cfg.alphas}
    payload = {
        "command": "cone-profile",
        "surface": _surface_meta(cfg),
        "results": {"profiles": profiles},
    }
    out = _out_dir(cfg)
    _write_json(out / "cone_profile.json", payload)
    for a, c in profiles.items():
        print(f"alpha={a}: C={c:.6g}")
    return 0


def cmd_report(cfg: RunConfig, args) -> int:
    out = _out_dir(cfg)
    reports = sorted(out.glob("*.json"))
    if not reports:
        raise MissingInputError(f"no report JSON files in {out}")
    rows = []
    for path in reports:
        data = json.loads(path.read_text())
        command = data.get("command", "")
        surface = data.get("surface", {})
        kind = surface.get("kind", "?")
        res = data.get("results", {})
        if command == "area-growth":
            label, ref = AREA_REFERENCES.get(kind, ("", None))
            rows.append((f"{kind} C_a", f"{res['area_constant']:.4g}",
                         label, path.name))
            rows.append((f"{kind} area exponent", f"{res['exponent']:.3f}",
                         "cubic (3)" if kind == "helicoid" else "2", path.name))
        elif command == "growth-fit":
            name = data.get("field", "?")
            label, _ = GROWTH_REFERENCES.get((kind, name), ("", None))
            shown = (f"{res['alpha']:.3f}" if res["preferred"] == "power"
                     else f"log (residual {res['log_residual']:.2g})")
            rows.append((f"{kind} {name} growth", shown, label, path.name))
        elif command == "osc-decay":
            ratios = res.get("ratios", [])
            if ratios:
                rows.append((f"{kind} decay ratio", f"{max(ratios):.4f}",
                             "< 1", path.name))
        elif command == "certify":
            rows.append((f"{kind} certificate",
                         "pass" if res.get("all_pass") else "FAIL", "", path.name))
        elif command == "cone-profile":
            for a, c in res.get("profiles", {}).items():
                rows.append((f"{kind} cone C(alpha={a})", f"{c:.4g}", "", path.name))
        elif command == "nodal":
            rows.append((f"{kind} nodal length", f"{res['length']:.4g}", "", path.name))
    csv_path = out / "summary.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["quantity", "measured", "reference", "source"])
        writer.writerows(rows)
    width = max(len(r[0]) for r in rows) if rows else 0
    for name, value, ref, _ in rows:
        suffix = f" (reference {ref})" if ref else ""
        print(f"{name:<{width}}  {value}{suffix}")
    print(f"wrote {csv_path}")
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def _cfg_dict(cfg: RunConfig) -> dict:
    from dataclasses import fields as dc_fields

    return {f.name: getattr(cfg, f.name) for f in dc_fields(cfg)
            if not f.name.startswith("_")}


_FLAG_DESTS = {
    "surface": "kind",
    "order": "order",
    "radius": "radius",
    "target-h": "target_h",
    "vertex-cap": "vertex_cap",
    "param-radius": "param_radius",
    "field-kind": "field_kind",
    "field-name": "field_name",
    "boundary": "boundary",
    "solve-radius": "solve_radius",
    "seed": "seed",
    "radii-base": "radii_base",
    "radii-count": "radii_count",
    "radii": "radii_list",
    "levels": "levels",
    "pair-samples": "pair_samples",
    "alphas": "alphas",
    "scales": "scales",
    "holder-radius": "holder_radius",
    "area-constant": "area_constant",
    "out": "out_dir",
    "threads": "threads",
}


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="run configuration file")
    sub.add_argument("--mesh-file", help="load a minlab-mesh v1 file instead of building")
    sub.add_argument("--field-file", help="load a minlab-field v1 file")
    sub.add_argument("--surface", choices=surfaces.KINDS)
    sub.add_argument("--order", type=int)
    sub.add_argument("--radius", type=float)
    sub.add_argument("--target-h", type=float)
    sub.add_argument("--vertex-cap", type=int)
    sub.add_argument("--param-radius", type=float)
    sub.add_argument("--field-kind", choices=("coordinate", "parameter", "dirichlet"))
    sub.add_argument("--field-name")
    sub.add_argument("--boundary")
    sub.add_argument("--solve-radius", type=float)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--radii-base", type=float)
    sub.add_argument("--radii-count", type=int)
    sub.add_argument("--radii", type=float, nargs="+")
    sub.add_argument("--levels", type=int)
    sub.add_argument("--pair-samples", type=int)
    sub.add_argument("--alphas", type=float, nargs="+")
    sub.add_argument("--scales", type=float, nargs="+")
    sub.add_argument("--holder-radius", type=float)
    sub.add_argument("--area-constant", type=float)
    sub.add_argument("--out")
    sub.add_argument("--threads", type=int)


def _config_from_args(args) -> RunConfig:
    if args.config:
        if not Path(args.config).exists():
            raise MissingInputError(f"config file not found: {args.config}")
        cfg = RunConfig.load(args.config)
    else:
        cfg = RunConfig()
    values = _cfg_dict(cfg)
    for flag, dest in _FLAG_DESTS.items():
        val = getattr(args, flag.replace("-", "_"), None)
        if val is None:
            continue
        if isinstance(values[dest], tuple):
            values[dest] = tuple(val)
        else:
            values[dest] = val
    return RunConfig(**values)


COMMANDS = {
    "mesh": cmd_mesh,
    "solve": cmd_solve,
    "area-growth": cmd_area_growth,
    "osc-decay": cmd_osc_decay,
    "certify": cmd_certify,
    "growth-fit": cmd_growth_fit,
    "holder": cmd_holder,
    "nodal": cmd_nodal,
    "cone-profile": cmd_cone_profile,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minlab",
        description="harmonic-function experiments on minimal-surface patches",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub = subparsers.add_parser(name)
        _add_common_flags(sub)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        code = COMMANDS[args.command](cfg, args)
    except MissingInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DegenerateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except (ArgumentError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MinlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    return code


if __name__ == "__main__":
    sys.exit(main())
