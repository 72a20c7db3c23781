"""Command-line front end.

    steklovqc factors  --family polygon --param 6
    steklovqc spectrum --family ellipse --param-sq 0.5 --n-max 10
    steklovqc bounds   --family hippopede --param-sq 0.25 --n-max 8
    steklovqc bounds   --spectrum spec.json
    steklovqc tables   3

Exit codes: 0 success, 2 invalid configuration, 3 a proven inequality is violated.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bounds import SUM_TOL, BoundReport, report_from_spectrum, rho_all
from .errors import BoundViolation
from .factors import closed_form_factors, g_factor
from .geometry import StarlikeDomain, domain_from_config
from .spectrum import SteklovSpectrum, steklov_eigenvalues
from .tables import build_table

EXIT_CONFIG = 2
EXIT_VIOLATION = 3


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    domain: StarlikeDomain | None
    family: str | None
    param: float | None
    n_max: int = 20
    output: str = "text"
    degree: int | None = None
    quad_nodes: int | None = None


def _fmt(x) -> str:
    if x is None:
        return "-"
    return "inf" if math.isinf(x) else f"{x:.4f}"


def _json_num(x):
    if x is None:
        return None
    return "inf" if math.isinf(x) else x


def _parse_origin(text: str | None):
    if text is None:
        return None
    try:
        x, y = (float(s) for s in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"--origin expects x,y, got {text!r}") from exc
    return [x, y]


def _family_param(family: str, args) -> float | None:
    if args.param is not None and args.param_sq is not None:
        raise ConfigError("give --param or --param-sq, not both")
    if args.param_sq is not None:
        if family == "polygon":
            raise ConfigError("--param-sq does not apply to polygons")
        if args.param_sq < 0:
            raise ConfigError("--param-sq must be nonnegative")
        return math.sqrt(args.param_sq)
    if args.param is None and family != "disk":
        raise ConfigError(f"family {family!r} needs --param or --param-sq")
    return args.param


def make_config(args) -> RunConfig:
    if args.n_max is not None and args.n_max < 1:
        raise ConfigError("--n-max must be >= 1")
    n_max = args.n_max or 20
    origin = _parse_origin(getattr(args, "origin", None))
    try:
        if args.config:
            cfg = json.loads(Path(args.config).read_text())
            if origin is not None:
                cfg["origin"] = origin
            d = domain_from_config(cfg)
            family = cfg["family"]
            param = cfg.get("param")
        elif args.family:
            family = args.family
            param = _family_param(family, args)
            cfg = {"family": family, "param": param}
            if origin is not None:
                cfg["origin"] = origin
            d = domain_from_config(cfg)
        else:
            raise ConfigError("need --family or --config")
    except (OSError, json.JSONDecodeError, ValueError, TypeError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    if origin is not None and origin != [0.0, 0.0]:
        family = "custom"
    return RunConfig(args.command, d, family, param, n_max, args.output, args.degree, args.quad_nodes)


def _solver_kw(cfg: RunConfig) -> dict:
    kw = {}
    if cfg.degree is not None:
        kw["K"] = cfg.degree
    if cfg.quad_nodes is not None:
        kw["nq"] = cfg.quad_nodes
    return kw


def cmd_factors(cfg: RunConfig, out) -> int:
    numeric = g_factor(cfg.domain)
    closed = None
    if cfg.family in ("polygon", "ellipse", "hippopede", "disk"):
        closed = closed_form_factors(cfg.family, cfg.param)
    names = ("g0", "g1", "g", "gamma1", "gamma")

    def get(f, k):
        return None if f is None else (f.g if k == "g" else getattr(f, k))

    def gap(a, b):
        if a is None or b is None:
            return None
        if math.isinf(a) and math.isinf(b):
            return 0.0
        return abs(a - b) / abs(b)

    rows = [(k, get(closed, k), get(numeric, k), gap(get(numeric, k), get(closed, k))) for k in names]
    if cfg.output == "json":
        out.write(json.dumps({k: {"closed_form": _json_num(c), "quadrature": _json_num(q), "rel_diff": _json_num(r)}
                              for k, c, q, r in rows}, indent=2) + "\n")
    elif cfg.output == "csv":
        out.write("factor,closed_form,quadrature,rel_diff\n")
        for k, c, q, r in rows:
            out.write(",".join([k] + ["" if v is None else ("inf" if math.isinf(v) else repr(float(v)))
                                      for v in (c, q, r)]) + "\n")
    else:
        out.write(f"{'factor':>7}  {'closed form':>12}  {'quadrature':>12}  {'rel diff':>9}\n")
        for k, c, q, r in rows:
            rd = "-" if r is None else f"{r:.1e}"
            out.write(f"{k:>7}  {_fmt(c):>12}  {_fmt(q):>12}  {rd:>9}\n")
        # short summary lines that are easy to grep
        best = closed if closed is not None else numeric
        out.write(f"g={_fmt(best.g)}\n")
        if best.gamma is not None:
            out.write(f"gamma={_fmt(best.gamma)}\n")
    return 0


def _spectrum(cfg: RunConfig) -> SteklovSpectrum:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return steklov_eigenvalues(cfg.domain, None, cfg.n_max, **_solver_kw(cfg))


def cmd_spectrum(cfg: RunConfig, out) -> int:
    spec = _spectrum(cfg)
    r = rho_all(spec)
    if cfg.output == "json":
        out.write(json.dumps({"eigenvalues": spec.eigenvalues.tolist(), "L": spec.L,
                              "normalized": spec.normalized.tolist(), "rho": r.tolist(),
                              "diagnostics": spec.diagnostics}, indent=2, default=str) + "\n")
        return 0
    if cfg.output == "csv":
        out.write("j,sigma,sigma_L,rho_n\n")
        for j, (s, x, rr) in enumerate(zip(spec.eigenvalues, spec.normalized, r), start=1):
            out.write(f"{j},{float(s)!r},{float(x)!r},{float(rr)!r}\n")
        return 0
    out.write(f"L = {spec.L:.10f}\n")
    out.write(f"{'j':>3}  {'sigma_j':>14}  {'sigma_j L':>14}  {'rho_j':>8}\n")
    for j, (s, x, rr) in enumerate(zip(spec.eigenvalues, spec.normalized, r), start=1):
        out.write(f"{j:>3}  {s:>14.10f}  {x:>14.10f}  {rr:>8.4f}\n")
    dg = spec.diagnostics
    out.write(f"degree={dg.get('degree')} nodes={dg.get('nodes')} rank={dg.get('rank')} "
              f"route={dg.get('route')} converged={dg.get('converged')}\n")
    return 0


def _emit_report(rep: BoundReport, cfg_output: str, out) -> None:
    if cfg_output == "json":
        out.write(rep.to_json() + "\n")
    elif cfg_output == "csv":
        out.write(rep.to_csv())
    else:
        out.write(f"g = {_fmt(rep.g)}   gamma = {_fmt(rep.gamma)}   "
                  f"rho_max = {rep.rho_max:.4f} at n = {rep.argmax}\n")
        out.write(f"{'n':>3}  {'sum':>10}  {'bound_g':>10}  {'bound_gamma':>11}  {'hps':>10}  {'rho_n':>7}  tightest\n")
        for r in rep.rows:
            out.write(f"{r.n:>3}  {r.sum:>10.4f}  {r.bound_g:>10.4f}  {_fmt(r.bound_gamma):>11}  "
                      f"{r.hps:>10.4f}  {r.rho_n:>7.4f}  {r.tightest}\n")


def _load_spectrum_file(path: str):
    raw = json.loads(Path(path).read_text())
    if "normalized" in raw:
        x = np.asarray(raw["normalized"], dtype=float)
        L = float(raw.get("L", 1.0))
        spec = SteklovSpectrum(x / L, L)
    elif "eigenvalues" in raw and "L" in raw:
        spec = SteklovSpectrum(np.asarray(raw["eigenvalues"], dtype=float), float(raw["L"]))
    else:
        raise ConfigError("spectrum file needs 'normalized' or 'eigenvalues' and 'L'")
    g = raw.get("g")
    gamma = raw.get("gamma")
    return spec, (None if g is None else float(g)), (None if gamma is None else float(gamma))


def cmd_bounds(cfg: RunConfig | None, args, out) -> int:
    if args.spectrum:
        try:
            spec, g, gamma = _load_spectrum_file(args.spectrum)
        except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc
        if cfg is not None:
            f = g_factor(cfg.domain)
            g = f.g if g is None else g
            gamma = f.gamma if gamma is None else gamma
        n_max = len(spec) if args.n_max is None else min(args.n_max, len(spec))
        rep = report_from_spectrum(spec, math.inf if g is None else g, gamma, n_max)
        output = args.output
    else:
        spec = _spectrum(cfg)
        f = g_factor(cfg.domain)
        rep = report_from_spectrum(spec, f.g, f.gamma, cfg.n_max)
        output = cfg.output
    _emit_report(rep, output, out)
    bad = rep.violations(tol=SUM_TOL)
    if bad:
        for v in bad:
            print(f"violation: {v}", file=sys.stderr)
        return EXIT_VIOLATION
    return 0


def cmd_tables(args, out) -> int:
    kw = {}
    if args.degree is not None:
        kw["K"] = args.degree
    if args.quad_nodes is not None:
        kw["nq"] = args.quad_nodes
    tab = build_table(args.which, n_max=args.n_max or 20, spectra=not args.factors_only, **kw)
    csv_text = tab.to_csv()
    if args.output == "csv":
        out.write(csv_text)
    elif args.output == "json":
        out.write(json.dumps({"table": tab.number, "key": tab.key,
                              "rows": {name: cells for name, cells in tab.rows()},
                              "columns": [c.label for c in tab.columns]}, indent=2) + "\n")
    else:
        out.write(tab.to_text())
    if args.csv_dir is not None:
        path = Path(args.csv_dir) / f"table{tab.number}.csv"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(csv_text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="steklovqc", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, domain=True):
        if domain:
            p.add_argument("--family", choices=["disk", "polygon", "ellipse", "hippopede"])
            p.add_argument("--param", type=float, help="N, eccentricity, delta or disk radius")
            p.add_argument("--param-sq", type=float, help="squared parameter (eps^2 or delta^2)")
            p.add_argument("--origin", help="polar origin as x,y")
            p.add_argument("--config", help="JSON domain file")
        p.add_argument("--n-max", type=int, default=None)
        p.add_argument("--degree", type=int, help="fixed polynomial degree K")
        p.add_argument("--quad-nodes", type=int, help="boundary quadrature nodes")
        p.add_argument("--output", choices=["text", "csv", "json"], default="text")

    common(sub.add_parser("factors", help="geometric factors g0, g1, g, gamma1, gamma"))
    common(sub.add_parser("spectrum", help="Steklov eigenvalues"))
    pb = sub.add_parser("bounds", help="compare eigenvalue sums with the bounds")
    common(pb)
    pb.add_argument("--spectrum", help="JSON file with precomputed eigenvalues instead of solving")
    pt = sub.add_parser("tables", help="regenerate a reference table")
    pt.add_argument("which", type=int, choices=[1, 2, 3])
    pt.add_argument("--csv-dir", default=".", help="directory for tableN.csv ('' to skip)")
    pt.add_argument("--factors-only", action="store_true", help="skip the eigenvalue solves")
    common(pt, domain=False)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "tables":
            if args.csv_dir == "":
                args.csv_dir = None
            return cmd_tables(args, out)
        if args.command == "bounds" and args.spectrum and not (args.family or args.config):
            return cmd_bounds(None, args, out)
        cfg = make_config(args)
        if args.command == "factors":
            return cmd_factors(cfg, out)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, out)
        return cmd_bounds(cfg, args, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BoundViolation as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
