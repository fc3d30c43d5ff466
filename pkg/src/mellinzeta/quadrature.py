"""Adaptive Gauss-Kronrod (7/15) integration with explicit error accounting.

Integrands are vectorized: ``f`` receives a 1-d float array and returns an
array of the same shape, or a ``(values, abs_errors)`` pair when the
integrand itself is only known to a bounded accuracy.  The error estimate of
a panel is ``|K15 - G7|`` floored at a few ulps of the panel's absolute mass,
plus the Kronrod-weighted evaluation error when one is supplied.
"""
from __future__ import annotations

import csv
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import _backend
from .errors import ConvergenceError, DomainError, GridCoverageError
from .results import EvalResult

EPS = 2.220446049250313e-16

_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# 15 reference nodes on [-1, 1] in ascending order, with matching weights
NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_W = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_W = np.zeros(15)
for _i, _w in zip((1, 3, 5), _WG[:3]):
    GAUSS_W[_i] = _w
    GAUSS_W[14 - _i] = _w
GAUSS_W[7] = _WG[3]
ERR_W = KRONROD_W - GAUSS_W

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and panel controls; effective tolerance is max(abs_tol, rel_tol * |I|)."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_panels: int = 200_000
    min_panel_width: float = 1e-12
    osc_freq_hint: float = 0.0

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0 or self.min_panel_width <= 0:
            raise DomainError("tolerances and min_panel_width must be positive")
        if self.max_panels < 1 or self.osc_freq_hint < 0:
            raise DomainError("max_panels >= 1 and osc_freq_hint >= 0 required")

    def tolerance(self, value) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def tightened(self, factor: float) -> "QuadSpec":
        return QuadSpec(self.rel_tol / factor, self.abs_tol / factor, self.max_panels,
                        self.min_panel_width, self.osc_freq_hint)


DEFAULT_SPEC = QuadSpec()


def panel_nodes(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Abscissae of the 15 Kronrod nodes for each panel, shape (n, 15)."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return mid[:, None] + half[:, None] * NODES[None, :]


def _rule(fx: np.ndarray, half: np.ndarray):
    """Kronrod value, |K - G| error and absolute mass per panel."""
    k = half * (fx @ KRONROD_W)
    e = np.abs(half * (fx @ ERR_W))
    mass = half * (np.abs(fx) @ KRONROD_W)
    return k, np.maximum(e, 50.0 * EPS * mass), mass


def _call(f: Integrand, x: np.ndarray):
    """Evaluate ``f`` on an (n, 15) node array; returns (values, eval errors or None)."""
    r = f(x.ravel())
    if isinstance(r, tuple):
        return np.asarray(r[0]).reshape(x.shape), np.asarray(r[1], dtype=np.float64).reshape(x.shape)
    return np.asarray(r).reshape(x.shape), None


def _eval_panels(f: Integrand, a: np.ndarray, b: np.ndarray):
    x = panel_nodes(a, b)
    fx, ex = _call(f, x)
    half = 0.5 * (b - a)
    k, e, _ = _rule(fx, half)
    ev = half * (ex @ KRONROD_W) if ex is not None else np.zeros_like(e)
    return k, e, ev


def _initial_breaks(a: float, b: float, width: float) -> np.ndarray:
    n = max(1, int(math.ceil((b - a) / width - 1e-12)))
    return np.linspace(a, b, n + 1)


def _adaptive(f: Integrand, breaks: np.ndarray, spec: QuadSpec, dtype=float) -> EvalResult:
    a = breaks[:-1].copy()
    b = breaks[1:].copy()
    length = breaks[-1] - breaks[0]
    done_v = []
    done_e = []
    n_evals = 0
    n_panels = a.size
    while a.size:
        # refinement cannot reduce the integrand's own evaluation error, so only
        # the rule error drives acceptance; both are reported
        k, e, ev = _eval_panels(f, a, b)
        n_evals += 15 * a.size
        total = sum(np.sum(v) for v in done_v) + np.sum(k)
        tol = spec.tolerance(total)
        h = b - a
        ok = (e <= np.maximum(tol * h / length, ev)) | (h <= spec.min_panel_width) | (e <= 64.0 * EPS * np.abs(k))
        done_v.append(k[ok])
        done_e.append(e[ok] + ev[ok])
        a, b = a[~ok], b[~ok]
        if a.size and n_panels + a.size > spec.max_panels:
            value = sum(np.sum(v) for v in done_v) + np.sum(k[~ok])
            err = sum(np.sum(v) for v in done_e) + np.sum(e[~ok] + ev[~ok])
            best = EvalResult(dtype(value), float(err), n_panels, n_evals)
            raise ConvergenceError(f"max_panels={spec.max_panels} exhausted (err {err:.2e} > {tol:.2e})", best)
        mid = 0.5 * (a + b)
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        n_panels += a.size // 2
    value = math.fsum(np.concatenate(done_v).real) if dtype is float else complex(
        math.fsum(np.concatenate(done_v).real), math.fsum(np.concatenate(done_v).imag))
    err = math.fsum(np.concatenate(done_e))
    return EvalResult(dtype(value), float(err), n_panels, n_evals)


def integrate(f: Integrand, a: float, b: float, spec: QuadSpec = DEFAULT_SPEC) -> EvalResult:
    """Adaptive integral of a real vectorized ``f`` over [a, b]."""
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    width = b - a
    if spec.osc_freq_hint > 0:
        width = min(width, 2 * math.pi / (4 * spec.osc_freq_hint))
    return _adaptive(f, _initial_breaks(a, b, width), spec)


def integrate_c(f: Integrand, a: float, b: float, spec: QuadSpec = DEFAULT_SPEC,
                n_init: int = 1) -> EvalResult:
    """Adaptive integral of a complex-valued vectorized ``f`` over [a, b]."""
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    return _adaptive(f, np.linspace(a, b, max(1, n_init) + 1), spec, dtype=complex)


def oscillation_breaks(a: float, b: float, t: float, max_width: float = math.inf) -> np.ndarray:
    """Breakpoints on [a, b] with each panel under a quarter period of x^{-it} (local frequency t/x)."""
    t = abs(t)
    pts = [a]
    x = a
    ratio = 1.0 + math.pi / (2.0 * t) if t > 0 else math.inf
    while x < b:
        nxt = min(x * ratio, x + max_width, b)
        if nxt - x < 1e-9 * b:  # guard against stalling next to b
            nxt = b
        pts.append(nxt)
        x = nxt
    return np.asarray(pts)


def integrate_complex(amplitude: Integrand, sigma: float, t: float, a: float, b: float,
                      spec: QuadSpec = DEFAULT_SPEC) -> EvalResult:
    """Integral of amplitude(x) x^{-sigma} exp(-i t log x) over [a, b], 1 <= a < b."""
    a, b = float(a), float(b)
    if not 1.0 <= a < b:
        raise DomainError(f"need 1 <= a < b, got [{a}, {b}]")
    s = complex(sigma, t)

    def g(x):
        w = np.exp(-s * np.log(x))
        r = amplitude(x)
        if isinstance(r, tuple):  # (values, evaluation errors)
            return np.asarray(r[0]) * w, np.asarray(r[1]) * np.abs(w)
        return np.asarray(r) * w

    breaks = oscillation_breaks(a, b, t, max_width=b - a)
    return _adaptive(g, breaks, spec, dtype=complex)


# ---------------------------------------------------------------- fixed panel tables

@dataclass
class PanelTable:
    """Integrand samples on a fixed set of Kronrod panels, reusable for weighted integrals.

    ``cell`` maps each panel to the grid cell it refines (panels of one cell
    are contiguous and ordered).
    """

    a: np.ndarray
    b: np.ndarray
    fx: np.ndarray
    cell: np.ndarray
    ex: np.ndarray | None = None

    @property
    def nodes(self) -> np.ndarray:
        return panel_nodes(self.a, self.b)

    @property
    def half(self) -> np.ndarray:
        return 0.5 * (self.b - self.a)

    def weighted(self, weight: Callable[[np.ndarray], np.ndarray], select=slice(None)):
        """Per-panel (Kronrod value, error) of the integral of f * weight."""
        a, b, fx = self.a[select], self.b[select], self.fx[select]
        x = panel_nodes(a, b)
        vals = fx * weight(x)
        half = 0.5 * (b - a)
        k = half * (vals @ KRONROD_W)
        e = np.abs(half * (vals @ ERR_W))
        mass = half * (np.abs(vals) @ KRONROD_W)
        return k, np.maximum(e, 50.0 * EPS * mass)

    def weighted_amplitudes(self, select=slice(None)):
        """Flattened (abscissa, Kronrod weight * f) pairs, and the same for the error rule."""
        a, b, fx = self.a[select], self.b[select], self.fx[select]
        half = 0.5 * (b - a)
        x = panel_nodes(a, b).ravel()
        kw = (half[:, None] * KRONROD_W[None, :] * fx).ravel()
        ew = (half[:, None] * ERR_W[None, :] * fx).ravel()
        return x, kw, ew

    def eval_err(self, weight=None, select=slice(None)) -> np.ndarray:
        """Per-panel bound on the integral of |weight| * (evaluation error of f)."""
        if self.ex is None:
            return np.zeros(self.a[select].size)
        ex = self.ex[select]
        if weight is not None:
            ex = ex * np.abs(weight(panel_nodes(self.a[select], self.b[select])))
        return 0.5 * (self.b[select] - self.a[select]) * (ex @ KRONROD_W)

    def concat(self, other: "PanelTable") -> "PanelTable":
        ex = None
        if self.ex is not None and other.ex is not None:
            ex = np.concatenate([self.ex, other.ex])
        return PanelTable(np.concatenate([self.a, other.a]), np.concatenate([self.b, other.b]),
                          np.concatenate([self.fx, other.fx]), np.concatenate([self.cell, other.cell]), ex)


def build_panels(f: Integrand, breaks: np.ndarray, spec: QuadSpec, cell_offset: int = 0) -> PanelTable:
    """Sample ``f`` on one panel per cell of ``breaks``, bisecting any cell that misses its tolerance.

    A sub-panel of width h inside a cell of width H must reach
    max(abs_tol * h / H, rel_tol * |value|).
    """
    a = breaks[:-1].astype(np.float64)
    b = breaks[1:].astype(np.float64)
    cell = np.arange(a.size) + cell_offset
    width = b - a
    out_a, out_b, out_fx, out_ex, out_cell = [], [], [], [], []
    budget = spec.max_panels
    has_ex = False
    while a.size:
        x = panel_nodes(a, b)
        fx, ex = _call(f, x)
        fx = fx.astype(np.float64)
        has_ex = ex is not None
        k, e, _ = _rule(fx, 0.5 * (b - a))
        h = b - a
        tol = np.maximum(spec.abs_tol * h / width, spec.rel_tol * np.abs(k))
        if has_ex:
            # below the integrand's own noise, bisection only chases rounding
            tol = np.maximum(tol, 0.5 * h * (ex @ KRONROD_W))
        ok = (e <= tol) | (h <= spec.min_panel_width) | (e <= 64.0 * EPS * np.abs(k))
        out_a.append(a[ok])
        out_b.append(b[ok])
        out_fx.append(fx[ok])
        out_ex.append(ex[ok] if has_ex else None)
        out_cell.append(cell[ok])
        a, b, cell, width = a[~ok], b[~ok], cell[~ok], width[~ok]
        budget -= a.size
        if budget < 0:
            raise ConvergenceError("panel budget exhausted while refining cells")
        mid = 0.5 * (a + b)
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        cell, width = np.concatenate([cell, cell]), np.concatenate([width, width])
    a = np.concatenate(out_a)
    b = np.concatenate(out_b)
    cell = np.concatenate(out_cell)
    order = np.lexsort((a, cell))
    ex = np.concatenate(out_ex)[order] if has_ex else None
    return PanelTable(a[order], b[order], np.concatenate(out_fx)[order], cell[order], ex)


# ---------------------------------------------------------------- cumulative grids

@dataclass
class CumulativeGrid:
    """prefix[i] ~ integral of f over [x0, x0 + i*step], built cell by cell.

    ``panels`` keeps the integrand samples so callers can form other
    weighted integrals over the same cells without re-evaluating ``f``.
    """

    x0: float
    step: float
    prefix: np.ndarray
    per_cell_err: np.ndarray
    panels: PanelTable | None = None
    cell_values: np.ndarray | None = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    @property
    def n_cells(self) -> int:
        return self.prefix.size - 1

    @property
    def x_end(self) -> float:
        return self.x0 + self.n_cells * self.step

    def x_at(self, i) -> np.ndarray:
        return self.x0 + np.asarray(i) * self.step

    @property
    def total_err(self) -> float:
        return math.fsum(self.per_cell_err)

    def cumulative_err(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum(self.per_cell_err)])

    def covers(self, x: float) -> bool:
        return self.x0 <= x <= self.x_end + 1e-12 * max(1.0, abs(self.x_end))

    def cell_index(self, x: float) -> int:
        if not self.covers(x):
            raise GridCoverageError(f"x = {x} outside grid [{self.x0}, {self.x_end}]")
        return min(int((x - self.x0) // self.step), self.n_cells - 1)

    def extend(self, f: Integrand, x1: float, spec: QuadSpec = DEFAULT_SPEC) -> "CumulativeGrid":
        """Append cells up to ``x1``; existing cells are reused untouched."""
        with self._lock:
            n_new = int(math.ceil((x1 - self.x0) / self.step - 1e-9)) - self.n_cells
            if n_new <= 0:
                return self
            start = self.n_cells
            breaks = self.x_at(np.arange(start, start + n_new + 1))
            table = build_panels(f, breaks, spec, cell_offset=start)
            vals, errs = _cell_sums(table, start, n_new)
            tail = _backend.compensated_cumsum(np.ascontiguousarray(vals))[1:]
            # restart the compensated sum from the stored prefix via the exact offset
            new_prefix = self.prefix[-1] + tail
            self.prefix = np.concatenate([self.prefix, new_prefix])
            self.per_cell_err = np.concatenate([self.per_cell_err, errs])
            self.cell_values = vals if self.cell_values is None else np.concatenate([self.cell_values, vals])
            self.panels = table if self.panels is None else self.panels.concat(table)
            return self

    def to_csv(self, path) -> None:
        """Write ``x,prefix,err`` rows (err is the accumulated error up to x)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        err = self.cumulative_err()
        tmp = path.with_suffix(path.suffix + ".tmp")
        with open(tmp, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "prefix", "err"])
            for i in range(self.prefix.size):
                w.writerow([repr(float(self.x_at(i))), repr(float(self.prefix[i])), repr(float(err[i]))])
        tmp.replace(path)

    @classmethod
    def from_csv(cls, path) -> "CumulativeGrid":
        """Load a prefix-only grid (no panel samples) written by :meth:`to_csv`."""
        xs, pre, err = [], [], []
        with open(path, newline="") as fh:
            r = csv.reader(fh)
            if next(r) != ["x", "prefix", "err"]:
                raise ValueError(f"{path}: unexpected header")
            for row in r:
                xs.append(float(row[0]))
                pre.append(float(row[1]))
                err.append(float(row[2]))
        if len(xs) < 2:
            raise ValueError(f"{path}: needs at least two rows")
        step = xs[1] - xs[0]
        cum = np.asarray(err)
        return cls(xs[0], step, np.asarray(pre), np.diff(cum))


def _cell_sums(table: PanelTable, start: int, n: int):
    idx = table.cell - start
    half = table.half
    k = half * (table.fx @ KRONROD_W)
    e = np.maximum(np.abs(half * (table.fx @ ERR_W)), 50.0 * EPS * half * (np.abs(table.fx) @ KRONROD_W))
    vals = np.zeros(n)
    errs = np.zeros(n)
    # cells hold few panels each; the order of accumulation is fixed by the sort in build_panels
    np.add.at(vals, idx, k)
    np.add.at(errs, idx, e + table.eval_err())
    return vals, errs


def cumulative(f: Integrand, x0: float, x1: float, step: float,
               spec: QuadSpec = DEFAULT_SPEC) -> CumulativeGrid:
    """Prefix integrals of ``f`` on the grid x0 + i*step up to (at least) x1."""
    if not x0 < x1 or step <= 0:
        raise DomainError("need x0 < x1 and step > 0")
    grid = CumulativeGrid(float(x0), float(step), np.zeros(1), np.zeros(0))
    return grid.extend(f, x1, spec)
