"""Command-line entry point.

CSV column orders
-----------------
wente       alpha_plus, c0_re, c0_im, ..., c4_re, c4_im, a_plus, a_minus, phi1, phi2
triangle    i, j, p1, p2, phi1, phi2, residual, status
gcurve      s, value
phia        s, value

JSON outputs carry a top-level "schema": 1 field. Numerical failures exit with
status 3 and write {"schema": 1, "error": ..., "message": ...} to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import curve as cv
from .blowup import S2, alpha0, beta_of_alpha, g_curve, phi_A
from .bspace import in_S21, orient_frame, period_map_basis, solve_Ba
from .errors import BoundaryHit, SpectralError
from .polyalg import from_disk_roots
from .wente import wente_a, wente_coeffs
from .whitham import (
    classify_limit,
    default_seed,
    flow,
    jsonl_logger,
    locate_torus_frame,
    phi,
)

SCHEMA = 1
EXIT_ARGS = 2
EXIT_NUMERIC = 3


class ArgumentError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    quad_tol: float = cv.QUAD_RTOL
    ode_tol: float = 1e-9
    boundary_eps: float = 1e-3
    output_format: str = "json"
    seed_roots: tuple[complex, complex] | None = None

    def __post_init__(self):
        if min(self.quad_tol, self.ode_tol, self.boundary_eps) <= 0:
            raise ArgumentError("tolerances must be positive")
        if self.boundary_eps <= self.ode_tol:
            raise ArgumentError("--boundary-eps must exceed --ode-tol")
        if self.output_format not in ("json", "csv"):
            raise ArgumentError(f"unknown format {self.output_format!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ArgumentError(f"cannot parse {text!r} as a complex number") from exc


def _roots(text: str) -> tuple[complex, complex]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ArgumentError("--roots needs two comma-separated complex numbers")
    r = tuple(_complex(p) for p in parts)
    if any(z == 0 for z in r):
        raise ArgumentError("roots must be nonzero")
    if any(abs(z) >= 1 for z in r):
        raise ArgumentError("roots must lie in the open unit disk")
    return r


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ArgumentError(f"expected two comma-separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ArgumentError(str(exc)) from exc


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ArgumentError(str(exc)) from exc


def _threads() -> int:
    raw = os.environ.get("WHITHAM_THREADS")
    if raw is None:
        return max(1, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError as exc:
        raise ArgumentError(f"WHITHAM_THREADS={raw!r} is not an integer") from exc
    if n < 1:
        raise ArgumentError("WHITHAM_THREADS must be at least 1")
    return n


def _seed(cfg: RunConfig):
    if cfg.seed_roots is None:
        return default_seed()
    return orient_frame(from_disk_roots(*cfg.seed_roots), rtol=cfg.quad_tol)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _json(obj) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_alpha0(args, cfg: RunConfig) -> str:
    a = alpha0()
    lo, hi = 1.0, 1.6
    if cfg.output_format == "csv":
        return _csv([(a, lo, hi, beta_of_alpha(a))], ["alpha0", "bracket_lo", "bracket_hi", "beta"])
    return _json({"alpha0": a, "bracket": [lo, hi], "beta": beta_of_alpha(a)})


def _wente_row(ap: float, cfg: RunConfig):
    c = wente_coeffs(ap).real
    p = phi(orient_frame(wente_a(ap), rtol=cfg.quad_tol), cfg.quad_tol)
    coeffs = [float(x) for z in c for x in (z, 0.0)]
    a_plus = float(npoly.polyval(1.0, c))
    a_minus = float(npoly.polyval(-1.0, c))
    return [ap, *coeffs, a_plus, a_minus, p[0], p[1]]


def cmd_wente(args, cfg: RunConfig) -> str:
    if args.alpha_plus is not None:
        grid = [args.alpha_plus]
    elif args.alpha_plus_grid is not None:
        grid = _floats(args.alpha_plus_grid)
    else:
        raise ArgumentError("wente needs --alpha-plus or --alpha-plus-grid")
    if not grid or any(not v > 0 for v in grid):
        raise ArgumentError("alpha_plus values must be positive")
    rows = [_wente_row(v, cfg) for v in grid]
    header = ["alpha_plus"] + [f"c{k}_{p}" for k in range(5) for p in ("re", "im")] + ["a_plus", "a_minus", "phi1",
                                                                                     "phi2"]
    if cfg.output_format == "json":
        return _json({"rows": [dict(zip(header, r)) for r in rows]})
    return _csv(rows, header)


def cmd_basis(args, cfg: RunConfig) -> str:
    """Oriented frame when a lies in S^2_1; otherwise the period-map basis of B_a."""
    a = from_disk_roots(*_roots(args.roots))
    space = solve_Ba(a, cfg.quad_tol)
    if in_S21(space):
        fr = orient_frame(a, rtol=cfg.quad_tol)
        return _json({"in_S21": True, **fr.to_json()})
    basis = period_map_basis(a, space, rtol=cfg.quad_tol)
    return _json({"in_S21": False, "a": a.poly.to_json(), "b1": basis.b1.to_json(), "b2": basis.b2.to_json(),
                  "labelling": [[z.real, z.imag] for z in map(complex, a.roots_in_disk)],
                  "singular_values": [float(v) for v in space.singular_values]})


def cmd_flow(args, cfg: RunConfig, out) -> str | None:
    dt = _pair(args.dt)
    fr = _seed(cfg)
    log = jsonl_logger(out)
    log({"schema": SCHEMA, "seed": fr.to_json()})
    try:
        st = flow(fr, dt, ode_tol=cfg.ode_tol, rtol=cfg.quad_tol, boundary_eps=cfg.boundary_eps,
                  track_periods=not args.no_periods, log=log)
    except BoundaryHit as hit:
        log({"boundary_hit": str(hit), "classification": hit.classification})
        return None
    log({"end": {"t": list(st.t), "phi": list(st.phi), "period_drift": st.period_drift,
                 "translation_error": st.translation_error}})
    return None


def _sweep_targets(n: int) -> list[tuple[int, int, float, float]]:
    out = []
    for i in range(n):
        p1 = (i + 1) / (n + 2)
        for j in range(n):
            p2 = (1 - p1) * (j + 1) / (n + 1)
            out.append((i, j, p1, p2))
    return out


def cmd_triangle(args, cfg: RunConfig) -> str:
    if args.grid < 1:
        raise ArgumentError("--grid must be at least 1")
    seed = _seed(cfg)
    targets = _sweep_targets(args.grid)

    def cell(t):
        i, j, p1, p2 = t
        try:
            fr = locate_torus_frame(p1, p2, seed, ode_tol=cfg.ode_tol, rtol=cfg.quad_tol,
                                    boundary_eps=cfg.boundary_eps)
            res = max(abs(fr.phi[0] - math.pi * p1), abs(fr.phi[1] - math.pi * p2))
            return [i, j, p1, p2, fr.phi[0], fr.phi[1], res, "ok"]
        except SpectralError as exc:
            return [i, j, p1, p2, float("nan"), float("nan"), float("nan"), exc.code]

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(cell, targets))  # map keeps cell order
    header = ["i", "j", "p1", "p2", "phi1", "phi2", "residual", "status"]
    if cfg.output_format == "json":
        return _json({"cells": [dict(zip(header, r)) for r in rows]})
    return _csv(rows, header)


def _table(fn, n: int, lo: float, hi: float, cfg: RunConfig) -> str:
    if n < 2:
        raise ArgumentError("--points must be at least 2")
    rows = [(float(s), float(fn(float(s)))) for s in np.linspace(lo, hi, n)]
    if cfg.output_format == "json":
        return _json({"rows": [{"s": s, "value": v} for s, v in rows]})
    return _csv(rows, ["s", "value"])


def cmd_gcurve(args, cfg: RunConfig) -> str:
    edge = S2 - 1e-3
    return _table(g_curve, args.points, -edge, edge, cfg)


def cmd_phia(args, cfg: RunConfig) -> str:
    return _table(phi_A, args.points, -S2, S2, cfg)


def cmd_classify(args, cfg: RunConfig) -> str:
    try:
        with open(args.trajectory_file) as fh:
            lines = [json.loads(s) for s in fh if s.strip()]
    except (OSError, json.JSONDecodeError) as exc:
        raise ArgumentError(f"cannot read trajectory: {exc}") from exc
    roots = [tuple(complex(*z) for z in rec["roots"]) for rec in lines if "roots" in rec]
    if not roots:
        raise ArgumentError("trajectory file has no records with roots")
    cls = classify_limit(roots, eps=cfg.boundary_eps)
    return _json(cls.to_json())


def cmd_locate(args, cfg: RunConfig) -> str:
    fr = locate_torus_frame(args.p1, args.p2, _seed(cfg), ode_tol=cfg.ode_tol, rtol=cfg.quad_tol,
                            boundary_eps=cfg.boundary_eps)
    return _json({"target": [args.p1, args.p2], "frame": fr.to_json()})


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spectral-moduli", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--quad-tol", type=float, default=cv.QUAD_RTOL)
    p.add_argument("--ode-tol", type=float, default=1e-9)
    p.add_argument("--boundary-eps", type=float, default=1e-3)
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--out", default=None, help="write output to FILE instead of stdout")
    p.add_argument("--seed-roots", default=None, help="disk roots of the seed curve, e.g. 0.3+0.2j,0.3-0.2j")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("alpha0", help="alpha0 and its bracket")
    w = sub.add_parser("wente", help="Wente family table (CSV)")
    w.add_argument("--alpha-plus", type=float, default=None)
    w.add_argument("--alpha-plus-grid", default=None, help="comma-separated values")
    b = sub.add_parser("basis", help="oriented frame of the curve with the given disk roots")
    b.add_argument("--roots", required=True)
    f = sub.add_parser("flow", help="Whitham flow trajectory as JSON lines")
    f.add_argument("--dt", required=True, help="displacement of phi, e.g. 0.1,0")
    f.add_argument("--seed", dest="seed_roots_f", default=None, help="disk roots of the seed curve")
    f.add_argument("--no-periods", action="store_true", help="skip per-step period drift tracking")
    t = sub.add_parser("triangle", help="N x N sweep of locate-torus targets")
    t.add_argument("--grid", type=int, required=True)
    g = sub.add_parser("gcurve", help="table of g on the exceptional fibre")
    g.add_argument("--points", type=int, default=41)
    a = sub.add_parser("phia", help="table of phi_A on the hypotenuse")
    a.add_argument("--points", type=int, default=41)
    c = sub.add_parser("classify", help="boundary case of a flow trajectory")
    c.add_argument("--trajectory-file", required=True)
    lt = sub.add_parser("locate-torus", help="curve with phi = pi (p1, p2)")
    lt.add_argument("--p1", type=float, required=True)
    lt.add_argument("--p2", type=float, required=True)
    return p


_DEFAULT_FORMAT = {"wente": "csv", "triangle": "csv", "gcurve": "csv", "phia": "csv"}

_COMMANDS = {
    "alpha0": cmd_alpha0,
    "wente": cmd_wente,
    "basis": cmd_basis,
    "triangle": cmd_triangle,
    "gcurve": cmd_gcurve,
    "phia": cmd_phia,
    "classify": cmd_classify,
    "locate-torus": cmd_locate,
}


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        seed = getattr(args, "seed_roots_f", None) or args.seed_roots
        fmt = args.format or _DEFAULT_FORMAT.get(args.command, "json")
        cfg = RunConfig(args.quad_tol, args.ode_tol, args.boundary_eps, fmt,
                        _roots(seed) if seed is not None else None)
        _threads()
    except ArgumentError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_ARGS
    out = open(args.out, "w") if args.out else stdout
    try:
        if args.command == "flow":
            cmd_flow(args, cfg, out)
        else:
            out.write(_COMMANDS[args.command](args, cfg))
    except ArgumentError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_ARGS
    except SpectralError as exc:
        stderr.write(json.dumps({"schema": SCHEMA, **exc.to_dict()}) + "\n")
        return EXIT_NUMERIC
    finally:
        if out is not stdout:
            out.close()
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
