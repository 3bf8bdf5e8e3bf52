"""Command-line entry point: ``steklov-heat {derive,ball,surface,weyl}``.

Every subcommand prints one JSON document (schema ``steklov-heat/1``).
Exit status: 0 when all gates pass, 2 when a gate fails, 1 on usage or IO errors.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

SCHEMA = "steklov-heat/1"
EXIT_OK, EXIT_USAGE, EXIT_GATE = 0, 1, 2
DERIVE_DIMS = range(2, 7)

log = logging.getLogger("steklov_heat")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class RunConfig:
    subcommand: str
    dim: Optional[int] = None
    depth: int = 2
    grid: List[float] = field(default_factory=list)
    mesh: Optional[dict] = None
    out: Optional[Path] = None
    reproducible: bool = False
    experimental_raw_k3: bool = False
    verbose: bool = False
    max_level: int = 10_000

    def validate(self) -> None:
        n = self.dim
        if self.subcommand in ("derive", "ball", "weyl") and n is None:
            raise UsageError(f"{self.subcommand} needs --dim")
        if self.subcommand == "derive":
            if n not in DERIVE_DIMS:
                raise UsageError(f"derive supports --dim {DERIVE_DIMS.start}..{DERIVE_DIMS.stop - 1}, got {n}")
            if not 0 <= self.depth <= 2:
                raise UsageError("--depth must be 0, 1 or 2")
            if self.depth > n - 1:
                raise UsageError(f"a_{self.depth} is not local in dimension {n}; use --depth <= {n - 1}")
            if self.experimental_raw_k3 and n < 4:
                raise UsageError("--experimental-raw-k3 needs --dim >= 4")
        elif self.experimental_raw_k3:
            raise UsageError("--experimental-raw-k3 only applies to derive")
        if self.subcommand == "ball":
            if n < 2:
                raise UsageError("ball needs --dim >= 2")
            if len(self.grid) < 8:
                raise UsageError("--grid-points must be >= 8")
            if not 0 < self.grid[0] < self.grid[-1] <= 0.2:
                raise UsageError("grid must satisfy 0 < --grid-min < --grid-max <= 0.2")
        if self.subcommand == "weyl":
            if n < 2:
                raise UsageError("weyl needs --dim >= 2")
            if self.max_level < 0:
                raise UsageError("--max-level must be >= 0")
        if self.subcommand == "surface" and self.mesh is None:
            raise UsageError("surface needs one of --mesh, --icosphere, --ellipsoid, --torus")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="steklov-heat", description="Steklov heat invariants: exact derivation and numerical checks.")
    common = _Parser(add_help=False)
    common.add_argument("--out", type=Path, help="write the JSON report here instead of stdout")
    common.add_argument("--reproducible", action="store_true", help="omit timestamp and wall times")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    d = sub.add_parser("derive", parents=[common], help="derive a_0..a_depth and compare with the closed forms")
    d.add_argument("--dim", type=int, required=True)
    d.add_argument("--depth", type=int, default=2)
    d.add_argument("--experimental-raw-k3", action="store_true", help="also emit jet-level a_3 (slow, unverified)")

    b = sub.add_parser("ball", parents=[common], help="fit heat invariants of the unit ball")
    b.add_argument("--dim", type=int, required=True)
    b.add_argument("--grid-min", type=float, default=1e-3)
    b.add_argument("--grid-max", type=float, default=1e-1)
    b.add_argument("--grid-points", type=int, default=24)
    b.add_argument("--max-level", type=int, default=10_000, help="Weyl table up to sigma = max-level + 1/2")

    s = sub.add_parser("surface", parents=[common], help="integrate a_0, a_1, a_2 over a closed mesh in R^3")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--mesh", type=Path, metavar="PATH")
    g.add_argument("--icosphere", nargs=2, metavar=("R", "S"))
    g.add_argument("--ellipsoid", nargs=4, metavar=("A", "B", "C", "S"))
    g.add_argument("--torus", nargs=3, metavar=("R", "r", "RES"))

    w = sub.add_parser("weyl", parents=[common], help="two-term Weyl residuals on the unit ball")
    w.add_argument("--dim", type=int, required=True)
    w.add_argument("--max-level", type=int, default=10_000)
    return p


def _parse_mesh_spec(ns) -> Optional[dict]:
    try:
        if getattr(ns, "mesh", None) is not None:
            return {"kind": "file", "path": str(ns.mesh)}
        if getattr(ns, "icosphere", None):
            r, sd = ns.icosphere
            return {"kind": "icosphere", "radius": float(r), "subdivisions": int(sd)}
        if getattr(ns, "ellipsoid", None):
            a, b, c, sd = ns.ellipsoid
            return {"kind": "ellipsoid", "axes": [float(a), float(b), float(c)], "subdivisions": int(sd)}
        if getattr(ns, "torus", None):
            R, r, res = ns.torus
            return {"kind": "torus", "R": float(R), "r": float(r), "resolution": int(res)}
    except ValueError as exc:
        raise UsageError(f"bad mesh generator arguments: {exc}") from exc
    return None


def parse_config(argv: Sequence[str]) -> RunConfig:
    import numpy as np

    ns = build_parser().parse_args(list(argv))
    cfg = RunConfig(
        subcommand=ns.subcommand,
        dim=getattr(ns, "dim", None),
        depth=getattr(ns, "depth", 2),
        out=ns.out,
        reproducible=ns.reproducible,
        experimental_raw_k3=getattr(ns, "experimental_raw_k3", False),
        verbose=ns.verbose,
        max_level=getattr(ns, "max_level", 10_000),
        mesh=_parse_mesh_spec(ns),
    )
    if ns.subcommand == "ball":
        if ns.grid_points < 8:
            raise UsageError("--grid-points must be >= 8")
        if not 0 < ns.grid_min < ns.grid_max:
            raise UsageError("need 0 < --grid-min < --grid-max")
        cfg.grid = [float(x) for x in np.geomspace(ns.grid_min, ns.grid_max, ns.grid_points)]
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, gates)


def _derive(cfg: RunConfig):
    from .invariants import derivation_report, raw_k3_report

    rep = derivation_report(cfg.dim, cfg.depth, timings=not cfg.reproducible)
    gates = {f"a{e['k']}_match": e["match"] for e in rep["invariants"]}
    if cfg.dim == 2 and cfg.depth >= 1:
        gates["a1_vanishes_n2"] = rep["invariants"][1]["zero"]
    if cfg.experimental_raw_k3:
        rep["raw_k3"] = raw_k3_report(cfg.dim)
    return rep, gates


# tolerances on (a0, a1, a2) for the ball fit
FIT_TOLERANCES = (1e-6, 1e-4, 1e-3)


def _ball(cfg: RunConfig):
    from .balls import BallSpectrum, ball_invariants, fit_heat_invariants, weyl_table

    n = cfg.dim
    fit = fit_heat_invariants(n, cfg.grid)
    expected = ball_invariants(n)
    names = ["a0", "a1", "a2"]
    gates = {}
    comparison = {}
    for i, name in enumerate(names):
        if name not in expected:
            continue
        err = abs(fit.coefficients[i] - expected[name])
        comparison[name] = {"fitted": fit.coefficients[i], "expected": expected[name], "abs_error": err}
        if n in (3, 4):
            gates[f"fit_{name}"] = err <= FIT_TOLERANCES[i]
    table = weyl_table(n, cfg.max_level)
    payload = {
        "dim": n,
        "spectrum_prefix": BallSpectrum(n, 10).to_dict(),
        "fit": fit.to_dict(),
        "comparison": comparison,
        "weyl": _weyl_summary(n, table, gates),
    }
    return payload, gates


def _weyl_samples(max_level: int) -> List[int]:
    levels = {0, max_level}
    m = 1
    while m < max_level:
        levels.add(m)
        m *= 2
    levels.update(x for x in (10, 100, 200, 400, 800) if x <= max_level)
    return sorted(levels)


def _weyl_summary(n: int, table, gates: dict) -> dict:
    max_level = len(table) - 1
    worst = max(abs(p.residual) for p in table)
    if n <= 3:
        gates["weyl_bounded"] = worst <= 0.26
    else:
        ratios = [table[m].scaled_residual for m in (100, 200, 400, 800) if m <= max_level]
        if len(ratios) >= 2:
            gates["weyl_scaled_residual_decreasing"] = all(b < a for a, b in zip(ratios, ratios[1:]))
    return {
        "max_level": max_level,
        "max_abs_residual": worst,
        "table": [table[m].to_dict() for m in _weyl_samples(max_level)],
    }


def _weyl(cfg: RunConfig):
    from .balls import ball_invariants, weyl_table

    gates: dict = {}
    table = weyl_table(cfg.dim, cfg.max_level)
    inv = ball_invariants(cfg.dim)
    payload = {"dim": cfg.dim, "a0": inv["a0"], "a1": inv["a1"], **_weyl_summary(cfg.dim, table, gates)}
    return payload, gates


def _build_mesh(spec: dict):
    from .geometry import ellipsoid, icosphere, load_mesh, torus

    kind = spec["kind"]
    if kind == "file":
        return load_mesh(spec["path"])
    if kind == "icosphere":
        return icosphere(spec["radius"], spec["subdivisions"])
    if kind == "ellipsoid":
        return ellipsoid(*spec["axes"], spec["subdivisions"])
    return torus(spec["R"], spec["r"], spec["resolution"])


def _surface(cfg: RunConfig):
    from .geometry import integrate_invariants

    try:
        mesh = _build_mesh(cfg.mesh)
    except OSError as exc:
        raise UsageError(f"cannot read mesh: {exc}") from exc
    report = integrate_invariants(mesh)
    gates = {
        "euler_identity": abs(report.euler_residual) <= 1e-2 * abs(report.a2),
        "rigidity_deficit_nonnegative": report.rigidity_deficit >= -1e-12 * math.sqrt(report.vol * report.int_H1_sq),
    }
    return {"mesh": cfg.mesh, "report": report.to_dict()}, gates


_DISPATCH = {"derive": _derive, "ball": _ball, "surface": _surface, "weyl": _weyl}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse, validate, run one subcommand and emit its JSON report; returns the exit code."""
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if cfg.verbose else logging.WARNING, stream=sys.stderr)

    from .geometry import MeshError

    t0 = time.perf_counter()
    try:
        payload, gates = _DISPATCH[cfg.subcommand](cfg)
    except (UsageError, MeshError, OSError) as exc:
        print(f"steklov-heat: {exc}", file=sys.stderr)
        return EXIT_USAGE
    doc = {"schema": SCHEMA, "command": cfg.subcommand, "gates": gates, "passed": all(gates.values())}
    doc.update(payload)
    if not cfg.reproducible:
        doc["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
        doc["wall_seconds"] = round(time.perf_counter() - t0, 6)
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    try:
        if cfg.out is None:
            sys.stdout.write(text)
        else:
            cfg.out.write_text(text)
    except OSError as exc:
        print(f"steklov-heat: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for name, ok in gates.items():
        log.info("gate %s: %s", name, "pass" if ok else "FAIL")
    return EXIT_OK if doc["passed"] else EXIT_GATE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
