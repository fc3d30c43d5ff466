"""Z1(s) = int_1^oo Z(x)^2 x^-s dx and the quantities derived from it.

Two evaluators share one line integral of Z^2 x^-s over [1, Y]:

* ``z1_direct`` (sigma >= 1.2) truncates at X and adds the closed-form
  integral of the smooth part log(x/2pi) + 2 gamma beyond X.  The neglected
  piece int_X^oo x^-s dE is bounded through |E(x)| <= C_E x^(1/3).
* ``z1_continued`` (sigma > 0.3) anchors the horizon at a zero X of E and
  integrates by parts past Y = Y_factor X with E - pi = G' and G = G1':

      Z1(s) = int_1^Y Z^2 x^-s dx + M(Y, s) - (E(Y) - pi) Y^-s
              - s G(Y) Y^(-s-1) - s (s+1) G1(Y) Y^(-s-2) + R,

  |R| <= |s (s+1) (s+2)| C_G1 Y^(-sigma-3/4) / (sigma + 3/4).  Written with
  the [X, Y] part of the tail folded back into the line integral this is the
  familiar form int_1^X + M(X, s) + pi X^-s + s int_X^oo (E - pi) x^(-s-1);
  the two agree term by term once E(X) = 0.

The line integral splits at x_a ~ step * |t|.  Below x_a the oscillation of
x^-it is faster than the shared table's cells, so [1, x_a] gets its own
panels a quarter period wide; above x_a the table's stored samples are
summed against x^-s by the compiled kernels.
"""
from __future__ import annotations

import csv
import io
import json
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _backend, calibration
from .errors import (CapacityError, DomainError, MellinZetaError, NoSignChangeError,
                     PoleProximityError, StripError)
from .laplace import cutoff as laplace_cutoff, kober_small_x, tail_bound
from .mean_square import (E, EZeroCache, G1_quad, G_quad, ZetaSquareTable, find_E_zero,
                          shared_table)
from .quadrature import (DEFAULT_SPEC, ERR_W, KRONROD_W, QuadSpec, build_panels, integrate,
                         integrate_c, oscillation_breaks, panel_nodes)
from .results import ComplexPoint, EvalResult
from .zeta_core import EPS, EULER_GAMMA, LOG_2PI, ZetaOptions, log_gamma, zsq_with_err

DIRECT_SIGMA_MIN = 1.2
CONTINUED_SIGMA_MIN = 0.3
X_POLICIES = ("paper_exponent", "fixed", "min_cost")
LOW_SPEC = QuadSpec(rel_tol=1e-12, abs_tol=1e-14)
EM_OPTIONS = ZetaOptions(method="euler_maclaurin")
H_M_MAX = 40
SCAN_EPS = 0.1
WINDOW_POINTS = 41  # odd, so the centre t is a grid point
GOLDEN_ITERS = 10
BRIDGE_X_LO = 1e-3
BRIDGE_X_HI = 50.0
SCAN_HEADER = ["t", "sigma", "re", "im", "abs", "abs_err", "X_used", "bound_13", "bound_14"]


@dataclass(frozen=True)
class Z1Config:
    """Controls for evaluating Z1.

    ``X_policy`` picks the target for the E-zero anchor X: ``min_cost`` uses
    max(X_min, 2|t|), ``paper_exponent`` max(X_min, |t|^(16/7)) and
    ``fixed`` X_fixed.  The horizon is Y = max(Y_factor X, t^2), scaled by
    ``precision``, which also scales ``direct_X`` and tightens ``spec``.
    """

    X_policy: str = "min_cost"
    X_min: float = 100.0
    X_fixed: float | None = None
    Y_factor: float = 100.0
    Y_max: float = 2.5e5
    exclusion_radius: float = 1e-3
    zero_C: float = 10.0
    direct_X: float = 40_000.0
    precision: float = 1.0
    spec: QuadSpec = LOW_SPEC

    def __post_init__(self):
        if self.X_policy not in X_POLICIES:
            raise DomainError(f"X_policy must be one of {X_POLICIES}")
        if self.X_policy == "fixed" and (self.X_fixed is None or self.X_fixed < 10):
            raise DomainError("fixed policy needs X_fixed >= 10")
        if self.X_min < 10 or self.Y_factor < 1 or self.zero_C < 1:
            raise DomainError("need X_min >= 10, Y_factor >= 1, zero_C >= 1")
        if self.direct_X < 100 or self.precision < 1 or self.exclusion_radius <= 0:
            raise DomainError("need direct_X >= 100, precision >= 1, exclusion_radius > 0")

    @property
    def quad_spec(self) -> QuadSpec:
        return self.spec.tightened(self.precision) if self.precision != 1 else self.spec


DEFAULT_CONFIG = Z1Config()


def _point(s) -> ComplexPoint:
    if isinstance(s, ComplexPoint):
        return s
    return ComplexPoint.from_complex(s)


def smooth_tail(X: float, s: complex) -> complex:
    """int_X^oo (log(x/2pi) + 2 gamma) x^-s dx for Re s > 1, continued analytically."""
    w = s - 1.0
    return X ** (-w) / w * (1.0 / w + math.log(X) + 2.0 * EULER_GAMMA - LOG_2PI)


# ---------------------------------------------------------------- line integral

@dataclass
class _NodeArrays:
    n_panels: int
    logx: np.ndarray       # flattened node logs
    kw: np.ndarray         # flattened Kronrod weight * Z^2
    ew: np.ndarray         # (n, 15) error-rule weight * Z^2
    loga: np.ndarray       # log of each panel's left end
    rule_err: np.ndarray   # per-panel error of the Z^2 integral (rule + evaluation)
    by_sigma: dict = field(default_factory=dict)

    def amplitudes(self, sigma: float):
        """kw * x^-sigma and the per-panel error weighted by its largest x^-sigma."""
        hit = self.by_sigma.get(sigma)
        if hit is None:
            if len(self.by_sigma) >= 2:
                self.by_sigma.pop(next(iter(self.by_sigma)))
            amp = self.kw * np.exp(-sigma * self.logx)
            werr = self.rule_err * np.exp(-max(sigma, 0.0) * self.loga)
            hit = self.by_sigma[sigma] = (amp, werr)
        return hit


_NODES: dict[int, _NodeArrays] = {}
_NODES_LOCK = threading.Lock()


def _node_arrays(table: ZetaSquareTable) -> _NodeArrays:
    pt = table.grid.panels
    with _NODES_LOCK:
        hit = _NODES.get(id(table))
        if hit is not None and hit.n_panels == pt.a.size:
            return hit
        half = pt.half
        x = pt.nodes
        kw = half[:, None] * KRONROD_W[None, :] * pt.fx
        ew = half[:, None] * ERR_W[None, :] * pt.fx
        mass = np.abs(kw).sum(axis=1)
        rule = np.maximum(np.abs(ew.sum(axis=1)), 50.0 * EPS * mass) + pt.eval_err()
        loga = np.log(np.maximum(pt.a, 1.0))
        arr = _NodeArrays(pt.a.size, np.log(x).ravel(), kw.ravel(), ew, loga, rule)
        _NODES[id(table)] = arr
        return arr


@lru_cache(maxsize=32)
def _low_panels(x_a: float, t_osc: float, spec: QuadSpec):
    pt = build_panels(zsq_with_err, oscillation_breaks(1.0, x_a, t_osc), spec)
    return pt, np.log(pt.nodes)


def _split_point(t_osc: float, Y: float, step: float) -> float:
    """Cell edge x_a >= max(1, step |t|): beyond it a table cell spans under 1/(2 pi) of a period."""
    x_a = step * math.ceil(max(1.0 / step, abs(t_osc)) - 1e-12)
    return min(x_a, Y)


def _low_part(sigma: float, ts: np.ndarray, x_a: float, t_osc: float, spec: QuadSpec):
    if x_a <= 1.0:
        return np.zeros(ts.size, dtype=complex), np.zeros(ts.size), 0
    pt, logx = _low_panels(float(x_a), float(t_osc), spec)
    half = pt.half
    vals = np.empty(ts.size, dtype=complex)
    errs = np.empty(ts.size)
    for j, t in enumerate(ts):
        w = np.exp(-complex(sigma, t) * logx)
        f = pt.fx * w
        k = half * (f @ KRONROD_W)
        e = np.abs(half * (f @ ERR_W))
        mass = half * (np.abs(f) @ KRONROD_W)
        ev = half * ((pt.ex * np.abs(w)) @ KRONROD_W)
        vals[j] = complex(math.fsum(k.real), math.fsum(k.imag))
        errs[j] = math.fsum(np.maximum(e, 50.0 * EPS * mass) + ev)
    return vals, errs, logx.size


def _oscillation_check(arr: _NodeArrays, sigma: float, t: float, sel: slice) -> float:
    """Sum over table panels of the Kronrod-Gauss difference of Z^2 x^-s at one t."""
    logx = arr.logx[sel.start * 15:sel.stop * 15].reshape(-1, 15)
    w = np.exp(-complex(sigma, t) * logx)
    return float(np.sum(np.abs(np.sum(arr.ew[sel] * w, axis=1))))


def line_integrals(sigma: float, ts, Y: float, t_osc: float | None = None,
                   table: ZetaSquareTable | None = None, spec: QuadSpec = LOW_SPEC,
                   check_t: float | None = None, equi: tuple[float, float] | None = None):
    """int_1^Y Z(x)^2 x^-(sigma + i t) dx for every t in ``ts``.

    ``t_osc`` (default max |t|) sets the split point and the low panels.
    ``check_t`` adds, for all t, the table-panel error of the product at that
    frequency (skipped when None).  ``equi = (t0, dt)`` declares ``ts`` as
    t0 + k dt and switches to the recurrence kernel.  Returns (values,
    errors, node count).
    """
    table = shared_table() if table is None else table
    ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
    t_osc = float(np.max(np.abs(ts))) if t_osc is None else float(t_osc)
    table.ensure(Y)
    x_a = _split_point(t_osc, Y, table.step)
    vals, errs, n_low = _low_part(sigma, ts, x_a, t_osc, spec)
    if Y > x_a:
        arr = _node_arrays(table)
        sel = table.panel_slice(x_a, Y)
        amp_full, werr = arr.amplitudes(sigma)
        amp = amp_full[sel.start * 15:sel.stop * 15]
        logx = arr.logx[sel.start * 15:sel.stop * 15]
        if equi is not None:
            re, im = _backend.mellin_sums_equi(amp, logx, float(equi[0]), float(equi[1]), ts.size)
        else:
            re, im = _backend.mellin_sums(amp, logx, ts)
        vals = vals + (re + 1j * im)
        err = float(np.sum(werr[sel])) + 8.0 * EPS * float(np.sum(np.abs(amp)))
        if check_t is not None:
            err += _oscillation_check(arr, sigma, check_t, sel)
        errs = errs + err
        n_low += amp.size
    return vals, errs, n_low


# ---------------------------------------------------------------- anchors

_ZEROS: dict[tuple, tuple[float, float]] = {}
_ZEROS_LOCK = threading.Lock()


def snap_to_E_zero(target: float, cfg: Z1Config = DEFAULT_CONFIG,
                   table: ZetaSquareTable | None = None, cache: EZeroCache | None = None) -> tuple[float, float]:
    """A zero of E at or just above ``target``: (x_star, |E(x_star)|).

    The search starts at the first table grid point >= target and takes the
    first sign change within zero_C * sqrt(target), so nearby targets share
    their anchor.
    """
    table = shared_table() if table is None else table
    step = table.step
    C = cfg.zero_C
    i0 = int(math.ceil(target / step - 1e-9))
    i1 = int(math.floor((target + C * math.sqrt(target)) / step))
    xs, es = table.E_on_grid(i0, i1)
    flips = np.nonzero(np.signbit(es[:-1]) != np.signbit(es[1:]))[0]
    if flips.size == 0:
        raise NoSignChangeError(f"E keeps one sign on [{target}, {target + C * math.sqrt(target)}]")
    anchor = float(xs[int(flips[0])])
    key = (id(table), anchor)
    with _ZEROS_LOCK:
        hit = _ZEROS.get(key)
    if hit is not None:
        return hit
    # one cell is searched, so the window constant only needs to exceed step / sqrt(anchor)
    c_cell = max(1.0, 2.0 * step / math.sqrt(anchor))
    x_star = cache.lookup(anchor, c_cell) if cache is not None else None
    if x_star is None:
        rec = find_E_zero(anchor, c_cell, table)
        x_star, res = rec.x_star, rec.residual
        if cache is not None:
            cache.append(rec)
    else:
        res = abs(E(x_star, table).value)
    with _ZEROS_LOCK:
        _ZEROS[key] = (x_star, res)
    return x_star, res


def X_target(t: float, cfg: Z1Config) -> float:
    t = abs(t)
    if cfg.X_policy == "fixed":
        return float(cfg.X_fixed)
    if cfg.X_policy == "paper_exponent":
        return max(cfg.X_min, t ** (16.0 / 7.0))
    return max(cfg.X_min, 2.0 * t)


@dataclass(frozen=True)
class Plan:
    method: str
    X: float   # X_used: the E-zero anchor
    Y: float   # upper end of the line integral, a table cell edge
    residual: float = 0.0  # |E(X)| at the anchor


def _cell_ceil(x: float, step: float) -> float:
    return step * math.ceil(x / step - 1e-9)


def plan_direct(cfg: Z1Config, X: float | None = None, table: ZetaSquareTable | None = None,
                cache: EZeroCache | None = None) -> Plan:
    """Truncation at the first E-zero past the target, so the boundary term E(X) X^-s vanishes."""
    table = shared_table() if table is None else table
    X = cfg.direct_X * cfg.precision if X is None else float(X)
    if X < 100:
        raise DomainError("direct truncation point X must be >= 100")
    x_star, res = snap_to_E_zero(X, cfg, table, cache)
    return Plan("direct", x_star, table.step * math.floor(x_star / table.step + 1e-9), res)


def plan_continued(t: float, cfg: Z1Config, table: ZetaSquareTable | None = None,
                   cache: EZeroCache | None = None) -> Plan:
    table = shared_table() if table is None else table
    X, res = snap_to_E_zero(X_target(t, cfg), cfg, table, cache)
    Y = _cell_ceil(max(cfg.Y_factor * X, t * t) * cfg.precision, table.step)
    if Y > cfg.Y_max:
        raise CapacityError(f"horizon Y = {Y:.4g} exceeds Y_max = {cfg.Y_max:.4g}")
    return Plan("continued", X, Y, res)


def _check_strip(p: ComplexPoint, method: str, cfg: Z1Config) -> None:
    if method == "direct":
        if p.sigma < DIRECT_SIGMA_MIN:
            raise StripError(f"direct evaluation needs sigma >= {DIRECT_SIGMA_MIN}, got {p.sigma}")
    else:
        if not p.sigma > CONTINUED_SIGMA_MIN:
            raise StripError(f"continued evaluation needs sigma > {CONTINUED_SIGMA_MIN}, got {p.sigma}")
        if abs(p.s - 1.0) <= cfg.exclusion_radius:
            raise PoleProximityError(f"|s - 1| <= {cfg.exclusion_radius}")


_TAIL_TERMS: dict[tuple, tuple] = {}


def _tail_terms(Y: float, table: ZetaSquareTable):
    key = (id(table), Y)
    hit = _TAIL_TERMS.get(key)
    if hit is None:
        hit = _TAIL_TERMS[key] = (E(Y, table), G_quad(Y, table), G1_quad(Y, table))
    return hit


def _closed_form(s: complex, plan: Plan, table: ZetaSquareTable) -> tuple[complex, float]:
    """Everything beyond the line integral, with its error bound."""
    sigma = s.real
    if plan.method == "direct":
        # int_X^oo x^-s dE with E(X) = 0 is s int_X^oo E x^(-s-1) dx
        X = plan.X
        main = smooth_tail(X, s)
        tail = (plan.residual * X ** -sigma + abs(s) * calibration.C_E
                * X ** (calibration.E_EXPONENT - sigma) / (sigma - calibration.E_EXPONENT))
        return main, 8.0 * EPS * abs(main) + tail
    Y = plan.Y
    main = smooth_tail(Y, s)
    rnd = 8.0 * EPS * abs(main)
    e, g, g1 = _tail_terms(Y, table)
    ys = Y ** (-s)
    val = main - (e.value - math.pi) * ys - s * g.value * ys / Y - s * (s + 1) * g1.value * ys / (Y * Y)
    yr = Y ** (-sigma)
    err = (e.abs_err * yr + abs(s) * g.abs_err * yr / Y + abs(s * (s + 1)) * g1.abs_err * yr / (Y * Y)
           + 8.0 * EPS * (abs(e.value) * yr + abs(s) * abs(g.value) * yr / Y
                          + abs(s * (s + 1)) * abs(g1.value) * yr / (Y * Y)))
    rem = abs(s * (s + 1) * (s + 2)) * calibration.C_G1 * Y ** (-sigma - 0.75) / (sigma + 0.75)
    return val, rnd + err + rem


def _partial_cell(s: complex, a: float, b: float, spec: QuadSpec) -> EvalResult:
    """int_a^b Z^2 x^-s dx over a fraction of one table cell."""
    def f(x):
        v, e = zsq_with_err(x)
        w = np.exp(-s * np.log(x))
        return v * w, e * np.abs(w)
    return integrate_c(f, a, b, spec)


def _evaluate(sigma: float, ts: np.ndarray, plan: Plan, cfg: Z1Config, table: ZetaSquareTable,
              t_osc: float | None = None, check: bool = True, equi=None):
    ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
    t_osc = float(np.max(np.abs(ts))) if t_osc is None else t_osc
    check_t = (t_osc if ts.size > 1 else float(ts[0])) if check else None
    vals, errs, nodes = line_integrals(sigma, ts, plan.Y, t_osc, table, cfg.quad_spec, check_t, equi)
    out = []
    for v, e, t in zip(vals, errs, ts):
        c, ce = _closed_form(complex(sigma, t), plan, table)
        if plan.X > plan.Y and plan.method == "direct":
            piece = _partial_cell(complex(sigma, t), plan.Y, plan.X, cfg.quad_spec)
            c += piece.value
            ce += piece.abs_err
        out.append(EvalResult(complex(v) + c, float(e) + ce, n_terms=nodes, n_evals=nodes))
    return out


def z1_direct(s, X: float | None = None, cfg: Z1Config = DEFAULT_CONFIG,
              table: ZetaSquareTable | None = None) -> EvalResult:
    """int_1^X Z^2 x^-s dx plus the smooth tail beyond X (sigma >= 1.2)."""
    p = _point(s)
    _check_strip(p, "direct", cfg)
    table = shared_table() if table is None else table
    return _evaluate(p.sigma, [p.t], plan_direct(cfg, X, table), cfg, table)[0]


def z1_continued(s, cfg: Z1Config = DEFAULT_CONFIG, table: ZetaSquareTable | None = None,
                 cache: EZeroCache | None = None) -> EvalResult:
    """Z1(s) for sigma > 0.3 through an E-zero anchor and two integrations by parts."""
    p = _point(s)
    _check_strip(p, "continued", cfg)
    table = shared_table() if table is None else table
    return _evaluate(p.sigma, [p.t], plan_continued(p.t, cfg, table, cache), cfg, table)[0]


@dataclass(frozen=True)
class Z1Evaluation:
    point: ComplexPoint
    result: EvalResult
    method: str
    X_used: float

    def to_dict(self) -> dict:
        v = complex(self.result.value)
        return {
            "s": {"sigma": self.point.sigma, "t": self.point.t},
            "value": {"re": v.real, "im": v.imag},
            "abs_err": self.result.abs_err,
            "method": self.method,
            "X_used": self.X_used,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def choose_plan(p: ComplexPoint, cfg: Z1Config, table: ZetaSquareTable,
                cache: EZeroCache | None = None, method: str = "auto") -> Plan:
    """Direct where sigma >= 1.2 (unless ``method`` says otherwise), continuation elsewhere."""
    if method not in ("auto", "direct", "continued"):
        raise DomainError(f"unknown method {method!r}")
    if method == "auto":
        method = "direct" if p.sigma >= DIRECT_SIGMA_MIN else "continued"
    _check_strip(p, method, cfg)
    if method == "direct":
        return plan_direct(cfg, None, table, cache)
    return plan_continued(p.t, cfg, table, cache)


def z1(s, cfg: Z1Config = DEFAULT_CONFIG, table: ZetaSquareTable | None = None,
       cache: EZeroCache | None = None, method: str = "auto") -> Z1Evaluation:
    """Z1(s) with the method recorded alongside the value."""
    p = _point(s)
    table = shared_table() if table is None else table
    plan = choose_plan(p, cfg, table, cache, method)
    r = _evaluate(p.sigma, [p.t], plan, cfg, table)[0]
    return Z1Evaluation(ComplexPoint(p.sigma, p.t, plan.method), r, plan.method, plan.X)


# ---------------------------------------------------------------- Laurent coefficients at s = 1

@dataclass(frozen=True)
class LaurentFit:
    c0: EvalResult
    c1: EvalResult
    h: tuple[float, ...]
    phi: tuple[EvalResult, ...]
    methods: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "c0": {"value": self.c0.value, "abs_err": self.c0.abs_err},
            "c1": {"value": self.c1.value, "abs_err": self.c1.abs_err},
            "target_c1": 2.0 * EULER_GAMMA - LOG_2PI,
            "points": [{"h": h, "phi": r.value, "abs_err": r.abs_err, "method": m}
                       for h, r, m in zip(self.h, self.phi, self.methods)],
        }


def _lagrange_at_zero(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Weights w0, w1 with p(0) = w0 . y and p'(0) = w1 . y for the interpolant through (h_i, y_i)."""
    n = h.size
    V = np.vander(h, n, increasing=True)
    inv = np.linalg.inv(V)
    return inv[0], inv[1]


def laurent_fit(h_list=(0.4, 0.2, 0.1, 0.05), cfg: Z1Config = DEFAULT_CONFIG,
                table: ZetaSquareTable | None = None) -> LaurentFit:
    """Polynomial extrapolation of phi(h) = h^2 Z1(1 + h) to h = 0.

    The error of each coefficient is the propagated point error plus the
    change caused by dropping the largest h from the fit.
    """
    h = np.asarray([float(v) for v in h_list])
    if h.size < 3 or np.any(np.diff(h) >= 0) or np.any(h < 0.05):
        raise DomainError("h_list needs >= 3 strictly decreasing values, all >= 0.05")
    table = shared_table() if table is None else table
    phi, methods = [], []
    for hi in h:
        p = ComplexPoint(1.0 + hi, 0.0)
        if p.sigma >= DIRECT_SIGMA_MIN - 1e-12:
            r = z1_direct(ComplexPoint(max(p.sigma, DIRECT_SIGMA_MIN), 0.0), cfg=cfg, table=table)
            methods.append("direct")
        else:
            r = z1_continued(p, cfg, table)
            methods.append("continued")
        phi.append(EvalResult(hi * hi * complex(r.value).real, hi * hi * r.abs_err, r.n_terms, r.n_evals))
    y = np.array([r.value for r in phi])
    ey = np.array([r.abs_err for r in phi])
    w0, w1 = _lagrange_at_zero(h)
    v0, v1 = w0 @ y, w1 @ y
    u0, u1 = _lagrange_at_zero(h[1:])
    d0, d1 = abs(v0 - u0 @ y[1:]), abs(v1 - u1 @ y[1:])
    e0 = float(np.abs(w0) @ ey) + d0
    e1 = float(np.abs(w1) @ ey) + d1
    n = sum(r.n_evals for r in phi)
    return LaurentFit(EvalResult(float(v0), e0, n_evals=n), EvalResult(float(v1), e1, n_evals=n),
                      tuple(float(v) for v in h), tuple(phi), tuple(methods))


def laurent_coeffs(h_list=(0.4, 0.2, 0.1, 0.05), cfg: Z1Config = DEFAULT_CONFIG,
                   table: ZetaSquareTable | None = None) -> tuple[EvalResult, EvalResult]:
    """(c0, c1) of h^2 Z1(1 + h) = c0 + c1 h + O(h^2); c0 -> 1, c1 -> 2 gamma - log 2pi."""
    fit = laurent_fit(h_list, cfg, table)
    return fit.c0, fit.c1


# ---------------------------------------------------------------- h_m and the Gamma bridge

def h_m(m: int, spec: QuadSpec = DEFAULT_SPEC) -> EvalResult:
    """int_0^1 Z(y)^2 y^m dy, with Z from the Euler-Maclaurin path only."""
    if not (isinstance(m, (int, np.integer)) and 0 <= m <= H_M_MAX):
        raise DomainError(f"m must be an integer in [0, {H_M_MAX}]")

    def f(y):
        v, e = zsq_with_err(y, EM_OPTIONS)
        w = y ** int(m)
        return v * w, e * w
    return integrate(f, 0.0, 1.0, spec)


def L1_bar_many(xs, table: ZetaSquareTable | None = None) -> tuple[np.ndarray, np.ndarray]:
    """int_1^oo Z(y)^2 exp(-x y) dy for each x > 0, from the shared table's samples."""
    table = shared_table() if table is None else table
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    if np.any(xs <= 0):
        raise DomainError("L1_bar needs x > 0")
    uppers = [_cell_ceil(max(laplace_cutoff(x), 1.0 + 45.0 / x), table.step) for x in xs]
    table.ensure(max(uppers))
    pt = table.grid.panels
    arr = _node_arrays(table)
    kwm = arr.kw.reshape(-1, 15)
    vals = np.empty(xs.size)
    errs = np.empty(xs.size)
    for j, (x, up) in enumerate(zip(xs, uppers)):
        sel = table.panel_slice(1.0, up)
        y = panel_nodes(pt.a[sel], pt.b[sel])
        w = np.exp(-x * y)
        k = np.sum(kwm[sel] * w, axis=1)
        e = np.abs(np.sum(arr.ew[sel] * w, axis=1))
        mass = np.sum(np.abs(k))
        vals[j] = math.fsum(k)
        errs[j] = (math.fsum(e) + float(arr.rule_err[sel] @ np.exp(-x * pt.a[sel]))
                   + 50.0 * EPS * mass + tail_bound(x, up))
    return vals, errs


def _small_x_part(s: complex, a: float, h0: float, h1: float, h2: float) -> tuple[complex, float]:
    """int_0^a of the small-x model of L1_bar times x^(s-1), and the remainder bound.

    L1_bar(x) = lg(x) (1/x + x/24) + pi - h0 + h1 x + O(x) with
    lg(x) = log(1/x) + gamma - log 2pi, using
    int_0^a x^(p-1) (log(1/x) + c) dx = a^p / p (log(1/a) + c + 1/p).
    """
    c = EULER_GAMMA - LOG_2PI
    la = math.log(1.0 / a)

    def log_power(p):
        return a ** p / p * (la + c + 1.0 / p)
    val = log_power(s - 1.0) + log_power(s + 1.0) / 24.0 + (math.pi - h0) * a ** s / s + h1 * a ** (s + 1) / (s + 1)
    sig = s.real
    _, ck = kober_small_x(a)
    rem = ck * a ** sig / (sig + 1.0) + h2 * a ** (sig + 2.0) / (2.0 * (sig + 2.0))
    return val, rem + 8.0 * EPS * abs(val)


@dataclass(frozen=True)
class BridgeSides:
    lhs: EvalResult
    rhs: EvalResult

    @property
    def discrepancy(self) -> EvalResult:
        lv, rv = complex(self.lhs.value), complex(self.rhs.value)
        d = abs(lv - rv) / abs(lv)
        return EvalResult(d, (self.lhs.abs_err + self.rhs.abs_err) / abs(lv))


def gamma_bridge_sides(s, spec: QuadSpec = DEFAULT_SPEC, cfg: Z1Config = DEFAULT_CONFIG,
                       table: ZetaSquareTable | None = None) -> BridgeSides:
    """Z1(s) Gamma(s) and int_0^oo L1_bar(x) x^(s-1) dx, evaluated independently."""
    p = _point(s)
    if not (DIRECT_SIGMA_MIN <= p.sigma <= 3.0 and abs(p.t) <= 5.0):
        raise DomainError("bridge check needs 1.2 <= sigma <= 3 and |t| <= 5")
    table = shared_table() if table is None else table
    z = z1_direct(p, cfg=cfg, table=table)
    lg = log_gamma(p.s)
    gam = complex(np.exp(lg.value))
    lhs = EvalResult(complex(z.value) * gam,
                     z.abs_err * abs(gam) + abs(complex(z.value) * gam) * (lg.abs_err + 4 * EPS))
    sv = p.s

    def f(u):
        x = np.exp(u)
        v, e = L1_bar_many(x, table)
        w = np.exp(sv * u)
        return v * w, e * np.abs(w)
    a, b = BRIDGE_X_LO, BRIDGE_X_HI
    mid = integrate_c(f, math.log(a), math.log(b), spec, n_init=8)
    h0, h1, h2 = (h_m(m, spec) for m in (0, 1, 2))
    small, small_err = _small_x_part(sv, a, h0.value, h1.value, h2.value)
    # on [0, a] the h_m enter with weights a^sigma / sigma and smaller
    small_err += (h0.abs_err + h1.abs_err) * a ** p.sigma / p.sigma
    # L1_bar(x) <= 3 exp(-x) / x beyond x_hi since Z(y)^2 <= 3 near y = 1 and decays
    big_tail = 3.0 * math.exp(-b) * b ** (p.sigma - 1.0)
    rhs = EvalResult(mid.value + small, mid.abs_err + small_err + big_tail, mid.n_terms, mid.n_evals)
    return BridgeSides(lhs, rhs)


def gamma_bridge_check(s, spec: QuadSpec = DEFAULT_SPEC, cfg: Z1Config = DEFAULT_CONFIG,
                       table: ZetaSquareTable | None = None) -> EvalResult:
    """Relative discrepancy |LHS - RHS| / |LHS| of Z1(s) Gamma(s) = int_0^oo L1_bar(x) x^(s-1) dx."""
    return gamma_bridge_sides(s, spec, cfg, table).discrepancy


# ---------------------------------------------------------------- scans

def window_max(t: float, eps: float = SCAN_EPS, cfg: Z1Config = DEFAULT_CONFIG,
               table: ZetaSquareTable | None = None, sigma: float = 0.5) -> EvalResult:
    """max |Z1(sigma + iv)| over |v - t| <= t^eps.

    A 41-point grid (centre included) is refined by golden-section search
    on the two cells around the grid maximum.  All points share the horizon
    planned for the upper window edge.
    """
    if t < 10 or not 0 < eps <= 0.5:
        raise DomainError("window_max needs t >= 10 and 0 < eps <= 0.5")
    table = shared_table() if table is None else table
    r = t ** eps
    lo, hi = t - r, t + r
    plan = choose_plan(ComplexPoint(sigma, hi), cfg, table)
    n = WINDOW_POINTS
    dv = (hi - lo) / (n - 1)
    vs = lo + dv * np.arange(n)
    vs[n // 2] = t
    grid = _evaluate(sigma, vs, plan, cfg, table, t_osc=hi, equi=(lo, dv))
    # the recurrence computes lo + k dv exactly; recompute the centre on its own
    grid[n // 2] = _evaluate(sigma, [t], plan, cfg, table, t_osc=hi, check=False)[0]
    grid[n // 2] = EvalResult(grid[n // 2].value, grid[0].abs_err, grid[0].n_terms, grid[0].n_evals)
    mods = np.array([abs(complex(g.value)) for g in grid])
    err = max(g.abs_err for g in grid)
    k = int(np.argmax(mods))
    best = float(mods[k])
    a, b = vs[max(k - 1, 0)], vs[min(k + 1, n - 1)]

    def fm(v):
        return abs(complex(_evaluate(sigma, [v], plan, cfg, table, t_osc=hi, check=False)[0].value))
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = fm(c), fm(d)
    for _ in range(GOLDEN_ITERS):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = fm(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = fm(d)
    best = max(best, fc, fd)
    return EvalResult(best, err, n_terms=grid[0].n_terms, n_evals=n + 2 + GOLDEN_ITERS)


@dataclass(frozen=True)
class ScanRow:
    t: float
    sigma: float
    re: float
    im: float
    abs: float
    abs_err: float
    X_used: float
    bound_13: float
    bound_14: float
    error: str = ""

    def csv_fields(self) -> list[str]:
        return [repr(float(getattr(self, k))) for k in SCAN_HEADER]


def scan_points(t0: float, t1: float, dt: float) -> np.ndarray:
    n = int(math.floor((t1 - t0) / dt + 1e-9)) + 1
    return t0 + dt * np.arange(n)


def _scan_row(sigma: float, t: float, eps: float, cfg: Z1Config, table: ZetaSquareTable,
              cache: EZeroCache | None, windows: bool = True) -> ScanRow:
    b14 = t ** (5.0 / 6.0 - sigma)
    try:
        ev = z1(ComplexPoint(sigma, t), cfg, table, cache)
        v = complex(ev.result.value)
        b13 = math.nan
        if windows and t >= 10:
            b13 = t ** (0.5 - sigma + eps) * window_max(t, eps, cfg, table).value
        return ScanRow(t, sigma, v.real, v.imag, abs(v), ev.result.abs_err, ev.X_used, b13, b14)
    except MellinZetaError as exc:
        return ScanRow(t, sigma, math.nan, math.nan, math.nan, math.inf, math.nan, math.nan, b14,
                       f"{type(exc).__name__}: {exc}")


def scan_line(sigma: float, t0: float, t1: float, dt: float, cfg: Z1Config = DEFAULT_CONFIG,
              table: ZetaSquareTable | None = None, eps: float = SCAN_EPS, threads: int = 1,
              reverse: bool = False, cache: EZeroCache | None = None,
              windows: bool = True) -> list[ScanRow]:
    """Z1(sigma + it) on t = t0, t0 + dt, ..., t1 with window and order-bound columns.

    Rows come back in ascending t whatever the evaluation order.  With
    ``windows=False`` the bound_13 column (the costly part) is left NaN.
    """
    if not (CONTINUED_SIGMA_MIN < sigma <= 1.5) or not (2 <= t0 < t1) or dt <= 0:
        raise DomainError("scan needs 0.3 < sigma <= 1.5, 2 <= t0 < t1 and dt > 0")
    table = shared_table() if table is None else table
    ts = [float(t) for t in scan_points(t0, t1, dt)]
    if reverse:
        ts = ts[::-1]
    # build everything the workers read before they start
    t_top = max(ts) + max(ts) ** eps
    for tt in (t_top, max(ts)):
        try:
            table.ensure(choose_plan(ComplexPoint(sigma, tt), cfg, table, cache).Y)
            table.ensure(choose_plan(ComplexPoint(0.5, tt), cfg, table, cache).Y)
        except MellinZetaError:
            pass
    _node_arrays(table)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda t: _scan_row(sigma, t, eps, cfg, table, cache, windows), ts))
    else:
        rows = [_scan_row(sigma, t, eps, cfg, table, cache, windows) for t in ts]
    return sorted(rows, key=lambda r: r.t)


def rows_to_csv(rows: list[ScanRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_HEADER)
    for r in rows:
        w.writerow(r.csv_fields())
    return buf.getvalue()
