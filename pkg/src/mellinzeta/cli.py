"""Command-line front end: one subcommand per computation, JSON or CSV on stdout or --out.

Settings resolve as command-line flag, then the MZ_CACHE_DIR environment
variable (cache directory only), then ``--config`` key=value lines, then
built-in defaults.  Exit status is 0 on success, 2 for argument or domain
errors and 3 when a numerical procedure fails; in the last case whatever
partial result exists is still written, with an ``error`` field.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import laplace, mean_square, mellin, zeta_core
from .arith import cached_divisor_table
from .errors import ConvergenceError, DomainError, MellinZetaError
from .quadrature import QuadSpec

EXIT_OK, EXIT_DOMAIN, EXIT_NUMERIC = 0, 2, 3
CONFIG_KEYS = ("tol", "cache_dir", "threads", "format")


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-8
    cache_dir: Path | None = None
    threads: int = 1
    format: str | None = None  # None: the command's natural format

    @property
    def workers(self) -> int:
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)

    @property
    def spec(self) -> QuadSpec:
        return QuadSpec(rel_tol=min(self.tol, 1e-6), abs_tol=min(self.tol, 1e-6) * 1e-2)

    @property
    def zeta_options(self) -> zeta_core.ZetaOptions:
        return zeta_core.ZetaOptions(tol=self.tol)

    def zero_cache(self) -> mean_square.EZeroCache | None:
        return None if self.cache_dir is None else mean_square.EZeroCache(self.cache_dir / "e_zeros.csv")


def read_config_file(path) -> dict:
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{n}: expected key=value")
        k, v = (p.strip() for p in line.split("=", 1))
        if k not in CONFIG_KEYS:
            raise DomainError(f"{path}:{n}: unknown key {k!r}")
        out[k] = v
    return out


def resolve_config(args, environ=os.environ) -> RunConfig:
    file_vals = read_config_file(args.config) if args.config else {}

    def pick(name, env=None):
        v = getattr(args, name)
        if v is not None:
            return v
        if env and environ.get(env):
            return environ[env]
        return file_vals.get(name)

    tol = pick("tol")
    cache = pick("cache_dir", "MZ_CACHE_DIR")
    threads = pick("threads")
    fmt = pick("format")
    try:
        cfg = RunConfig(
            tol=float(tol) if tol is not None else RunConfig.tol,
            cache_dir=Path(cache) if cache else None,
            threads=int(threads) if threads is not None else RunConfig.threads,
            format=fmt,
        )
    except ValueError as exc:
        raise DomainError(f"bad configuration value: {exc}") from None
    if not cfg.tol > 0 or cfg.threads < 0 or cfg.format not in (None, "json", "csv"):
        raise DomainError("need tol > 0, threads >= 0 and format json or csv")
    return cfg


# ---------------------------------------------------------------- output

def _plain(obj):
    """JSON-ready copy with numpy scalars unwrapped and non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _result(r) -> dict:
    v = r.value
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag, "abs_err": float(r.abs_err)}
    return {"value": float(v), "abs_err": float(r.abs_err)}


def _flatten(d, prefix=""):
    for k in sorted(d):
        v = d[k]
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, list):
            for i, item in enumerate(v):
                if isinstance(item, dict):
                    yield from _flatten(item, f"{key}.{i}.")
                else:
                    yield f"{key}.{i}", item
        else:
            yield key, v


def render(payload, fmt: str) -> str:
    if isinstance(payload, str):  # already rendered CSV
        return payload
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in _flatten(_plain(payload)):
            w.writerow([k, repr(v) if isinstance(v, float) else v])
        return buf.getvalue()
    return json.dumps(_plain(payload), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------- commands

def cmd_zeta(args, rc: RunConfig):
    z = zeta_core.hardy_Z(args.t, rc.zeta_options)
    return {"t": args.t, "Z": _result(z), "abs_zeta": abs(z.value)}


def cmd_e(args, rc: RunConfig):
    return {"T": args.T, "E": _result(mean_square.E(args.T))}


def cmd_g(args, rc: RunConfig):
    T = args.T
    params = mean_square.GExplicitParams(T, args.N)
    dtable = cached_divisor_table(max(args.M, params.N), rc.cache_dir)
    return {
        "T": T,
        "N": params.N,
        "M": args.M,
        "G_quad": _result(mean_square.G_quad(T)),
        "G1_quad": _result(mean_square.G1_quad(T)),
        "G_explicit": _result(mean_square.G_explicit(params, dtable)),
        "G_series": _result(mean_square.G_series(T, args.M, dtable)),
    }


def cmd_zero_e(args, rc: RunConfig):
    rec = mean_square.find_E_zero(args.T, args.C)
    cache = rc.zero_cache()
    if cache is not None and cache.lookup(rec.T_anchor, rec.C) is None:
        cache.append(rec)
    return {"T_anchor": rec.T_anchor, "C": rec.C, "x_lo": rec.x_lo, "x_hi": rec.x_hi,
            "x_star": rec.x_star, "residual": rec.residual}


def cmd_laplace(args, rc: RunConfig):
    T = args.T
    l1 = laplace.L1(1.0 / T, rc.spec)
    out = {"T": T, "sigma": 1.0 / T, "L1": _result(l1), "main": laplace.kober_main(T)}
    if T >= 10:
        out["residual"] = _result(laplace.kober_residual(T, rc.spec))
        out["b0"] = math.pi
    return out


def _z1_config(args, rc: RunConfig) -> mellin.Z1Config:
    kw = {}
    if getattr(args, "x_policy", None):
        kw["X_policy"] = args.x_policy
    if getattr(args, "x_fixed", None) is not None:
        kw["X_fixed"] = args.x_fixed
    return mellin.Z1Config(**kw)


def cmd_z1(args, rc: RunConfig):
    p = mellin.ComplexPoint(args.sigma, args.t)
    return mellin.z1(p, _z1_config(args, rc), cache=rc.zero_cache(), method=args.method).to_dict()


def cmd_laurent(args, rc: RunConfig):
    return mellin.laurent_fit(tuple(args.h), _z1_config(args, rc)).to_dict()


def cmd_bridge(args, rc: RunConfig):
    sides = mellin.gamma_bridge_sides(complex(args.sigma, args.t), rc.spec)
    return {"s": {"sigma": args.sigma, "t": args.t}, "lhs": _result(sides.lhs),
            "rhs": _result(sides.rhs), "discrepancy": _result(sides.discrepancy)}


def cmd_scan(args, rc: RunConfig):
    rows = mellin.scan_line(args.sigma, args.t0, args.t1, args.dt, _z1_config(args, rc),
                            threads=rc.workers, reverse=args.reverse, cache=rc.zero_cache(),
                            windows=not args.no_windows)
    if (rc.format or "csv") == "csv":
        return mellin.rows_to_csv(rows)
    return {"rows": [{k: getattr(r, k) for k in mellin.SCAN_HEADER} | ({"error": r.error} if r.error else {})
                     for r in rows]}


def cmd_coeffs(args, rc: RunConfig):
    if args.fit:
        table = laplace.fit_b(args.N, spec=rc.spec, basis=args.basis)
    else:
        table = laplace.a_coeffs(args.N)
    return table.to_dict()


# ---------------------------------------------------------------- parser

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--out", type=Path, help="write to this file instead of stdout")
    g.add_argument("--format", choices=("json", "csv"), default=None)
    g.add_argument("--tol", type=float, default=None, help="target accuracy (default 1e-8)")
    g.add_argument("--cache-dir", dest="cache_dir", default=None)
    g.add_argument("--threads", type=int, default=None, help="worker threads, 0 = all cores")
    g.add_argument("--config", type=Path, default=None, help="key=value file with defaults")
    return p


def _z1_flags(p):
    p.add_argument("--x-policy", dest="x_policy", choices=mellin.X_POLICIES, default=None)
    p.add_argument("--x-fixed", dest="x_fixed", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="mellinzeta", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("zeta", cmd_zeta, "Hardy Z(t) and |zeta(1/2 + it)|")
    p.add_argument("--t", type=float, required=True)
    p = add("e", cmd_e, "mean-square error term E(T)")
    p.add_argument("--T", type=float, required=True)
    p = add("g", cmd_g, "G(T) by quadrature, explicit formula and series; G1(T)")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--N", type=int, default=None, help="explicit-formula cutoff (default floor(T))")
    p.add_argument("--M", type=int, default=100_000, help="series terms")
    p = add("zero-e", cmd_zero_e, "first zero of E in [T, T + C sqrt T]")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--C", type=float, default=10.0)
    p = add("laplace", cmd_laplace, "L1(1/T) and the residual against its main term")
    p.add_argument("--T", type=float, required=True)
    p = add("z1", cmd_z1, "Z1(sigma + it)")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--method", choices=("auto", "direct", "continued"), default="auto")
    _z1_flags(p)
    p = add("laurent", cmd_laurent, "Laurent coefficients of Z1 at s = 1")
    p.add_argument("--h", type=float, nargs="+", default=[0.4, 0.2, 0.1, 0.05])
    _z1_flags(p)
    p = add("bridge", cmd_bridge, "check Z1(s) Gamma(s) against the Laplace-side integral")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t", type=float, default=0.0)
    p = add("scan", cmd_scan, "Z1 along a vertical line, CSV rows")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t0", type=float, required=True)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--reverse", action="store_true", help="evaluate from t1 down (same output)")
    p.add_argument("--no-windows", dest="no_windows", action="store_true",
                   help="skip the window maxima (bound_13 left NaN)")
    _z1_flags(p)
    p = add("coeffs", cmd_coeffs, "expansion coefficients a_n (exact) and optionally fitted b_n")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--fit", action="store_true")
    p.add_argument("--basis", choices=tuple(laplace.BASES), default="kober")
    return ap


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = resolve_config(args)
    except (DomainError, OSError) as exc:
        print(f"mellinzeta: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    fmt = rc.format or ("csv" if args.command == "scan" else "json")
    try:
        payload = args.func(args, rc)
        code = EXIT_OK
    except DomainError as exc:
        print(f"mellinzeta: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        payload = {"error": str(exc)}
        if exc.best is not None:
            payload["partial"] = _result(exc.best)
        code = EXIT_NUMERIC
    except MellinZetaError as exc:
        payload = {"error": f"{type(exc).__name__}: {exc}"}
        code = EXIT_NUMERIC
    if code != EXIT_OK:
        print(f"mellinzeta: {payload['error']}", file=sys.stderr)
    _emit(render(payload, fmt), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
