"""Command-line front end: generate surfaces, verify, factorize loops, dump oracles."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dpw import build_surface
from .errors import BirkhoffCellError, IwasawaCellError, LoopsurfError
from .factorize import birkhoff_split, iwasawa_split
from .loops import LaurentLoop, loop_add, loop_mul, reality_defect, wiener_norm
from .oracles import oracle_eval
from .potentials import PotentialSpec, RationalFunction, builtin_potential
from .serialize import loop_from_text, loop_to_text, potential_from_text
from .verify import (VerificationReport, cartesian_grid, compare_surfaces,
                     duality_potential_match, rp2_pointwise_symmetry,
                     sphere_energy_area, symmetric_mu_grid)
from .oracles import rp2_surface, s6_sphere

_FMT = "{:.17g}"


@dataclass
class JobConfig:
    potential: str | None = None
    builtin: str | None = None
    m: int = 2
    f2: list | None = None
    f4: list | None = None
    center: complex = 0.0
    radius: float = 1.0
    nu: int = 9
    nv: int = 9
    lambdas: list = field(default_factory=lambda: [0.0])
    realform: str = "noncompact"
    tol_iwasawa: float = 1e-10
    tol_check: float = 1e-6
    out: str | None = None
    mesh: str | None = None
    mesh_axes: str | None = None
    report: str | None = None
    checks: list = field(default_factory=lambda: ["s6-oracle", "rp2-oracle",
                                                  "rp2-symmetry", "duality"])

    def validate(self):
        if self.nu < 3 or self.nv < 3:
            raise ValueError("grid needs nu, nv >= 3")
        if self.radius <= 0:
            raise ValueError("grid radius must be positive")
        if self.tol_iwasawa <= 0 or self.tol_check <= 0:
            raise ValueError("tolerances must be positive")
        if self.realform not in ("noncompact", "compact"):
            raise ValueError(f"unknown real form {self.realform!r}")


def _overlay_config(cfg: JobConfig, path: str) -> JobConfig:
    # config file overrides flags
    doc = json.loads(Path(path).read_text())
    for key, value in doc.items():
        if key == "center":
            value = complex(value[0], value[1])
        if not hasattr(cfg, key):
            raise ValueError(f"unknown config key {key!r}")
        setattr(cfg, key, value)
    return cfg


def _load_potential(cfg: JobConfig) -> PotentialSpec:
    if cfg.potential:
        return potential_from_text(Path(cfg.potential).read_text())
    if cfg.builtin:
        kwargs = {}
        if cfg.builtin == "rp2-family":
            kwargs["m"] = int(cfg.m)
        if cfg.builtin == "duality-example":
            if cfg.f2 is not None:
                kwargs["f2"] = RationalFunction(np.array(cfg.f2, dtype=complex))
            if cfg.f4 is not None:
                kwargs["f4"] = RationalFunction(np.array(cfg.f4, dtype=complex))
        return builtin_potential(cfg.builtin, **kwargs)
    raise ValueError("no potential given (use --potential FILE or --builtin NAME)")


def _grid(cfg: JobConfig) -> np.ndarray:
    us = np.linspace(-cfg.radius, cfg.radius, cfg.nu)
    vs = np.linspace(-cfg.radius, cfg.radius, cfg.nv)
    return cfg.center + us[:, None] + 1j * vs[None, :]


def _write_csv(path: str, z_flat, lambdas, points):
    rows = []
    for i, z in enumerate(z_flat):
        for j, ang in enumerate(lambdas):
            vals = [z.real, z.imag, ang] + list(points[i, j])
            rows.append(",".join(_FMT.format(v + 0.0) for v in vals))
    Path(path).write_text("\n".join(rows) + "\n")


def _write_mesh(path: str, cfg: JobConfig, points, axes_spec: str):
    nu, nv = cfg.nu, cfg.nv
    pts = points[:, 0, :]
    if axes_spec.startswith("stereo:"):
        pole = int(axes_spec.split(":", 1)[1])
        denom = 1.0 - pts[:, pole]
        keep = [k for k in range(pts.shape[1]) if k != pole]
        proj = pts[:, keep] / denom[:, None]
        coords = proj[:, :3]
    else:
        axes = [int(a) for a in axes_spec.split(",")]
        if len(axes) != 3:
            raise ValueError("mesh-axes must name exactly 3 coordinates or stereo:<pole>")
        coords = pts[:, axes]
    lines = [f"v {_FMT.format(p[0])} {_FMT.format(p[1])} {_FMT.format(p[2])}"
             for p in coords]
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b = (i + 1) * nv + j + 1
            c = (i + 1) * nv + j + 2
            d = i * nv + j + 2
            lines.append(f"f {a} {b} {c}")
            lines.append(f"f {a} {c} {d}")
    Path(path).write_text("\n".join(lines) + "\n")


def cmd_generate(cfg: JobConfig) -> int:
    P = _load_potential(cfg)
    Z = _grid(cfg)
    lams = np.exp(1j * np.asarray(cfg.lambdas, dtype=float))
    frames, surf = build_surface(P, Z, lams, realform=cfg.realform,
                                 tol=cfg.tol_iwasawa,
                                 grid_shape=Z.shape,
                                 grid_spacing=float(2 * cfg.radius / (cfg.nu - 1)))
    if cfg.out:
        if surf is None:
            raise LoopsurfError("compact real form produces frames only; no CSV surface")
        _write_csv(cfg.out, Z.ravel(), cfg.lambdas, surf.points)
    if cfg.mesh:
        _write_mesh(cfg.mesh, cfg, surf.points, cfg.mesh_axes or "0,1,2")
    if cfg.report:
        failures = dict(frames.failures)
        if surf is not None:
            failures.update(surf.failures)
        Path(cfg.report).write_text(json.dumps(
            {"points": int(Z.size), "failures": {str(k): v for k, v in failures.items()}},
            indent=2) + "\n")
    return 0


def cmd_verify(cfg: JobConfig) -> int:
    report = VerificationReport()
    checks = cfg.checks
    if "s6-oracle" in checks:
        P = builtin_potential("s6-isotropic-example")
        Z, h = cartesian_grid(0.0, 1.2, 9)
        lams = np.array([1.0, 1j])
        _, surf = build_surface(P, Z, lams, tol=cfg.tol_iwasawa,
                                grid_shape=Z.shape, grid_spacing=h)
        orac = np.stack([s6_sphere(Z.ravel(), lam) for lam in lams], axis=1)
        res = compare_surfaces(surf, orac, tol=cfg.tol_check)
        report.add(f"s6 oracle match ({res.path})", res.error, cfg.tol_check)
    if "rp2-oracle" in checks or "rp2-symmetry" in checks:
        P = builtin_potential("rp2-family", m=2)
        Z = symmetric_mu_grid([0.6, 0.85], 8)
        lams = np.array([1.0])
        _, surf = build_surface(P, Z, lams, tol=cfg.tol_iwasawa)
        if "rp2-oracle" in checks:
            orac = rp2_surface(2, Z, 1.0)[:, None, :]
            res = compare_surfaces(surf, orac, tol=cfg.tol_check)
            report.add(f"rp2 m=2 oracle match ({res.path})", res.error, cfg.tol_check)
        if "rp2-symmetry" in checks:
            report.add("rp2 pointwise symmetry", rp2_pointwise_symmetry(surf),
                       cfg.tol_check)
    if "area-veronese" in checks:
        quad = sphere_energy_area(lambda z, lam: rp2_surface(1, z, lam), nr=80, ntheta=96)
        report.add("veronese double-cover area rel err vs 12 pi",
                   abs(quad.area / (12 * np.pi) - 1.0), 0.01)
    if "area-rp2" in checks:
        quad = sphere_energy_area(lambda z, lam: rp2_surface(2, z, lam), nr=80, ntheta=96)
        report.add("rp2 m=2 double-cover area rel err vs 20 pi",
                   abs(quad.area / (20 * np.pi) - 1.0), 0.01)
    if "duality" in checks:
        zs = [0.35 + 0.1j, -0.3 + 0.4j, 0.55j]
        res = duality_potential_match(zs)
        report.add("duality potential cross match", res["cross"], 1e-5)
        report.add("duality potential vs builtin", res["vs_potential"], 1e-5)
    text = report.to_text()
    print(text)
    if cfg.report:
        Path(cfg.report).write_text(report.to_json() + "\n")
    return 0 if report.passed else 1


def cmd_factorize(args, cfg: JobConfig) -> int:
    loop = loop_from_text(Path(args.loop).read_text())
    out = args.out or "factors"
    try:
        if args.mode == "birkhoff":
            minus, plus = birkhoff_split(loop, tol=cfg.tol_iwasawa)
            names = ("minus", "plus")
            parts = (minus, plus)
        else:
            frame, positive = iwasawa_split(loop, realform=cfg.realform,
                                            tol=cfg.tol_iwasawa)
            names = ("frame", "positive")
            parts = (frame, positive)
    except (BirkhoffCellError, IwasawaCellError) as exc:
        print(f"cell boundary: {exc}", file=sys.stderr)
        return 3
    recompose = loop_add(loop, loop_mul(parts[0], parts[1]), beta=-1.0)
    resid = wiener_norm(recompose)
    for name, part in zip(names, parts):
        Path(f"{out}.{name}.json").write_text(loop_to_text(part) + "\n")
    summary = {"residual": resid, "mode": args.mode}
    if args.mode == "iwasawa":
        summary["reality_defect"] = reality_defect(parts[0], cfg.realform)
    Path(f"{out}.residual.json").write_text(json.dumps(summary, indent=2) + "\n")
    return 0


def cmd_oracle(args, cfg: JobConfig) -> int:
    Z = _grid(cfg)
    lams = np.asarray(cfg.lambdas, dtype=float)
    rows = []
    for z in Z.ravel():
        for ang in lams:
            lam = np.exp(1j * ang)
            vals = oracle_eval(args.name, z, lam, m=cfg.m)
            vals = np.asarray(vals).ravel()
            row = [z.real, z.imag, ang] + [float(np.real(v)) for v in vals]
            rows.append(",".join(_FMT.format(v + 0.0) for v in row))
    text = "\n".join(rows) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="loopsurf",
                                 description="loop-group pipeline for Willmore surfaces")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--potential", help="potential file (JSON)")
        p.add_argument("--builtin", help="builtin potential name")
        p.add_argument("--m", type=int, default=2, help="rp2-family index")
        p.add_argument("--f2", help="comma list of complex coeffs a+bj for f2")
        p.add_argument("--f4", help="same for f4")
        p.add_argument("--grid", help="center_re,center_im,radius,nu,nv")
        p.add_argument("--lambdas", help="comma list of angles in radians")
        p.add_argument("--realform", choices=["noncompact", "compact"])
        p.add_argument("--tol-iwasawa", type=float, dest="tol_iwasawa")
        p.add_argument("--tol-check", type=float, dest="tol_check")
        p.add_argument("--out")
        p.add_argument("--mesh")
        p.add_argument("--mesh-axes", dest="mesh_axes")
        p.add_argument("--report")
        p.add_argument("--config", help="JSON config file; overrides flags")

    g = sub.add_parser("generate", help="run the pipeline and write surface samples")
    add_common(g)
    v = sub.add_parser("verify", help="run verification checks")
    add_common(v)
    v.add_argument("--checks", help="comma list of check names")
    f = sub.add_parser("factorize", help="factor a serialized loop")
    add_common(f)
    f.add_argument("--loop", required=True, help="loop file (JSON)")
    f.add_argument("--mode", choices=["iwasawa", "birkhoff"], default="iwasawa")
    o = sub.add_parser("oracle", help="dump closed-form oracle samples")
    add_common(o)
    o.add_argument("--name", required=True)
    return ap


def _cfg_from_args(args) -> JobConfig:
    cfg = JobConfig()
    if args.grid:
        parts = [float(x) for x in args.grid.split(",")]
        if len(parts) != 5:
            raise ValueError("--grid expects center_re,center_im,radius,nu,nv")
        cfg.center = complex(parts[0], parts[1])
        cfg.radius = parts[2]
        cfg.nu, cfg.nv = int(parts[3]), int(parts[4])
    if args.lambdas:
        cfg.lambdas = [float(x) for x in args.lambdas.split(",")]
    for key in ("potential", "builtin", "m", "realform", "tol_iwasawa",
                "tol_check", "out", "mesh", "mesh_axes", "report"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    for key in ("f2", "f4"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, [complex(x) for x in val.split(",")])
    if getattr(args, "checks", None):
        cfg.checks = args.checks.split(",")
    if args.config:
        cfg = _overlay_config(cfg, args.config)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = _cfg_from_args(args)
    except (ValueError, KeyError, json.JSONDecodeError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "generate":
            return cmd_generate(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "factorize":
            return cmd_factorize(args, cfg)
        if args.command == "oracle":
            return cmd_oracle(args, cfg)
    except (BirkhoffCellError, IwasawaCellError) as exc:
        print(f"cell boundary: {exc}", file=sys.stderr)
        return 3
    except (LoopsurfError, ValueError, FileNotFoundError) as exc:
        print(f"pipeline error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
