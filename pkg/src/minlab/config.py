"""Flat ``key = value`` run configuration with section headers.

The format is deliberately primitive: one ``[section]`` per line, one
``key = value`` per line, ``#`` comments, no nesting.  Values keep their
exact decimal form through a round trip (floats are written with
shortest-representation printing).
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ArgumentError

_SECTIONS = ("surface", "mesh", "field", "radii", "analysis", "output")


@dataclass
class RunConfig:
    # surface
    kind: str = "plane"
    order: int = 1
    # mesh
    radius: float = 8.0            # ambient coverage radius
    target_h: float = 0.1
    vertex_cap: int = 4_000_000
    param_radius: float = 0.0      # explicit parameter radius; 0 = derive from radius
    # field
    field_kind: str = "coordinate"  # coordinate | parameter | dirichlet
    field_name: str = "x3"          # x1|x2|x3 or u|v or boundary-data name
    boundary: str = "x3"            # dirichlet boundary data: x1|x2|x3|u|v|random
    solve_radius: float = 0.0       # dirichlet solve-domain radius; 0 = radius/2
    seed: int = 0
    # radii schedule
    radii_base: float = 1.0
    radii_count: int = 4
    radii_list: tuple = ()          # explicit schedule overrides base/count
    # analysis
    levels: int = 128
    pair_samples: int = 512
    alphas: tuple = (0.8, 0.5)
    scales: tuple = ()
    holder_radius: float = 0.0
    area_constant: float = 0.0      # 0 = measure from the radii schedule
    # output
    out_dir: str = "out"
    threads: int = 1

    _SECTION_OF = {
        "kind": "surface", "order": "surface",
        "radius": "mesh", "target_h": "mesh", "vertex_cap": "mesh",
        "param_radius": "mesh",
        "field_kind": "field", "field_name": "field", "boundary": "field",
        "solve_radius": "field", "seed": "field",
        "radii_base": "radii", "radii_count": "radii", "radii_list": "radii",
        "levels": "analysis", "pair_samples": "analysis", "alphas": "analysis",
        "scales": "analysis", "holder_radius": "analysis",
        "area_constant": "analysis",
        "out_dir": "output", "threads": "output",
    }

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.order < 1:
            raise ArgumentError("order must be >= 1")
        for name in ("radius", "target_h"):
            if getattr(self, name) <= 0:
                raise ArgumentError(f"{name} must be positive")
        for name in ("vertex_cap", "levels", "pair_samples", "threads",
                     "radii_count"):
            if getattr(self, name) <= 0:
                raise ArgumentError(f"{name} must be positive")

    def radii(self) -> list:
        """The radii schedule; validated against the patch radius on use."""
        if self.radii_list:
            schedule = list(self.radii_list)
        else:
            schedule = [self.radii_base * 2.0**k for k in range(self.radii_count)]
        if any(r <= 0 for r in schedule):
            raise ArgumentError("radii must be positive")
        if any(r > self.radius for r in schedule):
            raise ArgumentError("radii schedule exceeds the patch radius")
        return schedule

    # -- text form -----------------------------------------------------------

    def dumps(self) -> str:
        lines = []
        for section in _SECTIONS:
            lines.append(f"[{section}]")
            for f_ in fields(self):
                if f_.name.startswith("_") or self._SECTION_OF.get(f_.name) != section:
                    continue
                val = getattr(self, f_.name)
                if isinstance(val, tuple):
                    text = ", ".join(repr(x) for x in val)
                else:
                    text = repr(val) if isinstance(val, float) else str(val)
                lines.append(f"{f_.name} = {text}")
            lines.append("")
        return "\n".join(lines)

    def dump(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        kv = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line or (line.startswith("[") and line.endswith("]")):
                continue
            if "=" not in line:
                raise ArgumentError(f"bad config line: {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            kv[key] = val

        cfg = cls.__new__(cls)
        for f_ in fields(cls):
            if f_.name.startswith("_"):
                continue
            default = f_.default
            if f_.name not in kv:
                setattr(cfg, f_.name, default)
                continue
            raw = kv.pop(f_.name)
            if isinstance(default, tuple):
                items = [x.strip() for x in raw.split(",") if x.strip()]
                setattr(cfg, f_.name, tuple(float(x) for x in items))
            elif isinstance(default, bool):
                setattr(cfg, f_.name, raw.lower() in ("1", "true", "yes"))
            elif isinstance(default, int):
                setattr(cfg, f_.name, int(raw))
            elif isinstance(default, float):
                setattr(cfg, f_.name, float(raw))
            else:
                setattr(cfg, f_.name, raw)
        if kv:
            raise ArgumentError(f"unknown config keys: {sorted(kv)}")
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls.loads(Path(path).read_text())
