"""The mean-square error term E(T), its integrals G and G1, and explicit formulas for G.

Everything is driven by one cumulative table of Z(t)^2 on [0, X] with cells
of width ``step``.  Besides the prefix integrals the table keeps prefix sums
of the first and second moments, which turn the iterated integrals G and G1
into single weighted integrals of Z^2:

    int_0^T E      = int_0^T (T - u) Z(u)^2 du - M1(T)
    int_0^T (T-v)E = 1/2 int_0^T (T - u)^2 Z(u)^2 du - M2(T)

with M1, M2 the matching integrals of the main term.
"""
from __future__ import annotations

import csv
import math
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _backend, calibration
from .arith import DivisorTable
from .errors import DomainError, GridCoverageError, NoSignChangeError
from .quadrature import CumulativeGrid, QuadSpec, integrate, panel_nodes, KRONROD_W
from .results import EvalResult
from .zeta_core import DEFAULT_OPTIONS, EPS, EULER_GAMMA, TWO_PI, ZetaOptions, zsq_with_err

MAIN_CONST = 2.0 * EULER_GAMMA - 1.0
GRID_STEP = 0.25
GRID_SPEC = QuadSpec(rel_tol=1e-11, abs_tol=1e-13, max_panels=50_000_000)
GRID_OPTIONS = ZetaOptions(tol=1e-7)  # lets Riemann-Siegel serve the table up to ~1e6


def main_term(T):
    """T (log(T / 2pi) + 2 gamma - 1), with the limit 0 at T = 0."""
    T = np.asarray(T, dtype=np.float64)
    if np.any(T < 0):
        raise DomainError("main_term needs T >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(T > 0, T * (np.log(T / TWO_PI) + MAIN_CONST), 0.0)
    return float(out) if out.ndim == 0 else out


def _m1(T: float) -> float:
    # int_0^T t (log(t/2pi) + c) dt
    if T == 0:
        return 0.0
    return 0.5 * T * T * (math.log(T / TWO_PI) + MAIN_CONST) - 0.25 * T * T


def _m2(T: float) -> float:
    # int_0^T (T - t) t (log(t/2pi) + c) dt
    if T == 0:
        return 0.0
    return T**3 / 6.0 * (math.log(T / TWO_PI) + MAIN_CONST) - 5.0 * T**3 / 36.0


class ZetaSquareTable:
    """Lazily extended cumulative table of Z(t)^2 from t = 0.

    Extension is serialized by a lock; reads of the already built part are
    safe from any thread.
    """

    def __init__(self, step: float = GRID_STEP, spec: QuadSpec = GRID_SPEC,
                 opts: ZetaOptions = GRID_OPTIONS, auto_extend: bool = True):
        if step <= 0:
            raise DomainError("step must be positive")
        self.step = float(step)
        self.spec = spec
        self.opts = opts
        self.auto_extend = auto_extend
        self.grid: CumulativeGrid | None = None
        self._p1 = np.zeros(1)
        self._p2 = np.zeros(1)
        self._cum_err_cache: np.ndarray | None = None
        self._lock = threading.Lock()

    def _f(self, x):
        return zsq_with_err(x, self.opts)

    @property
    def x_end(self) -> float:
        return 0.0 if self.grid is None else self.grid.x_end

    def ensure(self, x: float) -> None:
        """Make sure the table covers [0, x]."""
        if x <= self.x_end:
            return
        if not self.auto_extend and self.grid is not None:
            raise GridCoverageError(f"table ends at {self.x_end}, need {x}")
        with self._lock:
            if x <= self.x_end:
                return
            # grow geometrically so repeated small requests stay cheap
            target = max(x, 1.25 * self.x_end)
            if self.grid is None:
                self.grid = CumulativeGrid(0.0, self.step, np.zeros(1), np.zeros(0))
            start = self.grid.n_cells
            self.grid.extend(self._f, target, self.spec)
            self._extend_moments(start)

    def _extend_moments(self, start: int) -> None:
        pt = self.grid.panels
        sel = np.searchsorted(pt.cell, start)
        a, b, fx, cell = pt.a[sel:], pt.b[sel:], pt.fx[sel:], pt.cell[sel:]
        x = panel_nodes(a, b)
        half = 0.5 * (b - a)
        n = self.grid.n_cells - start
        m1 = np.zeros(n)
        m2 = np.zeros(n)
        np.add.at(m1, cell - start, half * ((fx * x) @ KRONROD_W))
        np.add.at(m2, cell - start, half * ((fx * x * x) @ KRONROD_W))
        self._p1 = np.concatenate([self._p1, self._p1[-1] + _backend.compensated_cumsum(m1)[1:]])
        self._p2 = np.concatenate([self._p2, self._p2[-1] + _backend.compensated_cumsum(m2)[1:]])

    def _partial(self, lo: float, hi: float, power: int) -> EvalResult:
        spec = QuadSpec(rel_tol=self.spec.rel_tol, abs_tol=self.spec.abs_tol)
        if power == 0:
            return integrate(self._f, lo, hi, spec)

        def g(u):
            v, e = self._f(u)
            w = u**power
            return v * w, e * w
        return integrate(g, lo, hi, spec)

    def moments(self, T: float) -> tuple[tuple[float, float, float], tuple[float, float, float]]:
        """int_0^T u^k Z^2 du for k = 0, 1, 2, and error bounds for the integrals of
        Z^2, (T - u) Z^2 and (T - u)^2 Z^2."""
        T = float(T)
        if T < 0:
            raise DomainError("T must be >= 0")
        if T == 0:
            return (0.0, 0.0, 0.0), (0.0, 0.0, 0.0)
        self.ensure(T)
        g = self.grid
        i = min(int(T // self.step), g.n_cells)
        xi = i * self.step
        m = [g.prefix[i], self._p1[i], self._p2[i]]
        ce = g.per_cell_err[:i]
        w = T - self.step * np.arange(i)
        err = [math.fsum(ce), float(ce @ w), float(ce @ (w * w))]
        if T > xi:
            for k in range(3):
                r = self._partial(xi, T, k)
                m[k] += r.value
                if k == 0:
                    h = T - xi
                    err = [err[0] + r.abs_err, err[1] + h * r.abs_err, err[2] + h * h * r.abs_err]
        return (float(m[0]), float(m[1]), float(m[2])), tuple(err)

    def integral(self, T: float) -> EvalResult:
        """int_0^T Z^2 alone, skipping the higher moments."""
        T = float(T)
        if T < 0:
            raise DomainError("T must be >= 0")
        if T == 0:
            return EvalResult(0.0, 0.0)
        self.ensure(T)
        g = self.grid
        i = min(int(T // self.step), g.n_cells)
        xi = i * self.step
        val, err = float(g.prefix[i]), float(self._cum_err()[i])
        if T > xi:
            r = self._partial(xi, T, 0)
            val += r.value
            err += r.abs_err
        return EvalResult(val, err)

    def _cum_err(self) -> np.ndarray:
        n = self.grid.n_cells
        if self._cum_err_cache is None or self._cum_err_cache.size != n + 1:
            self._cum_err_cache = self.grid.cumulative_err()
        return self._cum_err_cache

    def E_on_grid(self, i_lo: int, i_hi: int) -> tuple[np.ndarray, np.ndarray]:
        """Abscissae and E values at the grid points i_lo..i_hi inclusive."""
        self.ensure(i_hi * self.step)
        idx = np.arange(i_lo, i_hi + 1)
        x = idx * self.step
        return x, self.grid.prefix[idx] - main_term(x)

    def panel_slice(self, x_lo: float, x_hi: float) -> slice:
        """Panels of the cells covering [x_lo, x_hi], both ends rounded outward to cell edges."""
        self.ensure(x_hi)
        c_lo = int(math.floor(x_lo / self.step + 1e-9))
        c_hi = int(math.ceil(x_hi / self.step - 1e-9))
        cell = self.grid.panels.cell
        return slice(int(np.searchsorted(cell, c_lo)), int(np.searchsorted(cell, c_hi)))

    def weighted_integral(self, weight, x_lo: float, x_hi: float) -> EvalResult:
        """int Z(u)^2 weight(u) du over the cells covering [x_lo, x_hi], from stored samples."""
        sel = self.panel_slice(x_lo, x_hi)
        pt = self.grid.panels
        k, e = pt.weighted(weight, sel)
        ev = pt.eval_err(weight, sel)
        return EvalResult(math.fsum(k), math.fsum(e) + math.fsum(ev), n_terms=k.size)

    def cell_errors_until(self, T: float) -> float:
        self.ensure(T)
        i = min(int(math.ceil(T / self.step)), self.grid.n_cells)
        return float(np.sum(self.grid.per_cell_err[:i]))


_SHARED: dict[tuple, ZetaSquareTable] = {}
_SHARED_LOCK = threading.Lock()


def shared_table(step: float = GRID_STEP, spec: QuadSpec = GRID_SPEC,
                 opts: ZetaOptions = GRID_OPTIONS) -> ZetaSquareTable:
    """Process-wide table for the given parameters."""
    key = (step, spec, opts)
    with _SHARED_LOCK:
        if key not in _SHARED:
            _SHARED[key] = ZetaSquareTable(step, spec, opts)
        return _SHARED[key]


def _table(table):
    return shared_table() if table is None else table


# ---------------------------------------------------------------- E and its zeros

def E(T: float, table: ZetaSquareTable | None = None) -> EvalResult:
    """E(T) = int_0^T Z^2 - T (log(T/2pi) + 2 gamma - 1)."""
    table = _table(table)
    T = float(T)
    if T < 0:
        raise DomainError("E needs T >= 0")
    if T == 0:
        return EvalResult(0.0, 0.0)
    r = table.integral(T)
    mt = main_term(T)
    return EvalResult(r.value - mt, r.abs_err + 4 * EPS * (abs(r.value) + abs(mt)), n_evals=int(T / table.step))


@dataclass(frozen=True)
class EZeroRecord:
    """A sign change of E inside [T_anchor, T_anchor + C sqrt(T_anchor)]."""

    T_anchor: float
    C: float
    x_lo: float
    x_hi: float
    x_star: float
    residual: float

    def __post_init__(self):
        hi = self.T_anchor + self.C * math.sqrt(self.T_anchor)
        if not (self.T_anchor <= self.x_lo <= self.x_star <= self.x_hi <= hi * (1 + 1e-14)):
            raise ValueError(f"inconsistent bracket {self}")


BISECT_WIDTH = 1e-8


def find_E_zero(T: float, C: float = 10.0, table: ZetaSquareTable | None = None) -> EZeroRecord:
    """First sign change of E in [T, T + C sqrt T], bisected to width 1e-8 then secant-polished."""
    table = _table(table)
    T, C = float(T), float(C)
    if T <= 0 or C < 1:
        raise DomainError("need T > 0 and C >= 1")
    end = T + C * math.sqrt(T)
    e_T = E(T, table).value
    if e_T == 0.0:
        return EZeroRecord(T, C, T, T, T, 0.0)
    step = table.step
    i_lo = int(math.ceil(T / step))
    i_hi = int(math.floor(end / step))
    xs, es = table.E_on_grid(i_lo, i_hi) if i_hi >= i_lo else (np.zeros(0), np.zeros(0))
    xs = np.concatenate([[T], xs, [end]])
    es = np.concatenate([[e_T], es, [E(end, table).value]])
    flips = np.nonzero(np.signbit(es[:-1]) != np.signbit(es[1:]))[0]
    if flips.size == 0:
        raise NoSignChangeError(f"E keeps one sign on [{T}, {end}]")
    j = int(flips[0])
    a, b = float(xs[j]), float(xs[j + 1])
    fa, fb = float(es[j]), float(es[j + 1])
    if fb == 0.0:
        return EZeroRecord(T, C, b, b, b, 0.0)
    while b - a > BISECT_WIDTH:
        m = 0.5 * (a + b)
        fm = E(m, table).value
        if fm == 0.0:
            return EZeroRecord(T, C, m, m, m, 0.0)
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    x = a - fa * (b - a) / (fb - fa)
    x = min(max(x, a), b)
    res = abs(E(x, table).value)
    mid_res = abs(E(0.5 * (a + b), table).value)
    if mid_res < res:
        x, res = 0.5 * (a + b), mid_res
    return EZeroRecord(T, C, a, b, x, res)


class EZeroCache:
    """Append-only CSV of discovered zeros: ``T_anchor,C,x_star,residual``."""

    HEADER = ["T_anchor", "C", "x_star", "residual"]

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def entries(self) -> list[tuple[float, float, float, float]]:
        if not self.path.exists():
            return []
        with open(self.path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or rows[0] != self.HEADER:
            return []
        out = []
        for r in rows[1:]:
            try:
                out.append(tuple(float(v) for v in r))
            except ValueError:
                continue
        return out

    def lookup(self, T: float, C: float) -> float | None:
        for t, c, x, _ in self.entries():
            if t == T and c == C:
                return x
        return None

    def append(self, rec: EZeroRecord) -> None:
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            new = not self.path.exists()
            with open(self.path, "a", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                if new:
                    w.writerow(self.HEADER)
                w.writerow([repr(rec.T_anchor), repr(rec.C), repr(rec.x_star), repr(rec.residual)])


def E_zero(T: float, C: float = 10.0, table: ZetaSquareTable | None = None,
           cache: EZeroCache | None = None) -> float:
    """x_star of :func:`find_E_zero`, served from ``cache`` when possible."""
    if cache is not None:
        hit = cache.lookup(float(T), float(C))
        if hit is not None:
            return hit
    rec = find_E_zero(T, C, table)
    if cache is not None:
        cache.append(rec)
    return rec.x_star


# ---------------------------------------------------------------- G and G1

def G_quad(T: float, table: ZetaSquareTable | None = None) -> EvalResult:
    """G(T) = int_0^T E(t) dt - pi T."""
    table = _table(table)
    T = float(T)
    if T == 0:
        return EvalResult(0.0, 0.0)
    (m0, m1, _), err = table.moments(T)
    head = T * m0 - m1
    val = head - _m1(T) - math.pi * T
    rnd = 8 * EPS * (T * abs(m0) + abs(m1) + abs(_m1(T)))
    return EvalResult(val, err[1] + rnd)


def G1_quad(T: float, table: ZetaSquareTable | None = None) -> EvalResult:
    """G1(T) = int_0^T G(t) dt."""
    table = _table(table)
    T = float(T)
    if T == 0:
        return EvalResult(0.0, 0.0)
    (m0, m1, m2), err = table.moments(T)
    head = 0.5 * (T * T * m0 - 2.0 * T * m1 + m2)
    val = head - _m2(T) - 0.5 * math.pi * T * T
    rnd = 8 * EPS * (T * T * abs(m0) + 2 * T * abs(m1) + abs(m2) + abs(_m2(T)))
    return EvalResult(val, 0.5 * err[2] + rnd)


# ---------------------------------------------------------------- explicit formulas

def f_phase(T: float, n):
    """2T arsinh sqrt(pi n / 2T) + sqrt(2 pi n T + pi^2 n^2) - pi/4."""
    n = np.asarray(n, dtype=np.float64)
    if T <= 0 or np.any(n < 1):
        raise DomainError("f_phase needs T > 0 and n >= 1")
    out = 2.0 * T * np.arcsinh(np.sqrt(math.pi * n / (2.0 * T))) \
        + np.sqrt(2.0 * math.pi * n * T + (math.pi * n) ** 2) - 0.25 * math.pi
    return float(out) if out.ndim == 0 else out


def g_phase(T: float, n):
    """T log(T / 2 pi n) - T + pi/4, defined for 2 pi n <= T."""
    n = np.asarray(n, dtype=np.float64)
    if T <= 0 or np.any(n < 1):
        raise DomainError("g_phase needs T > 0 and n >= 1")
    if np.any(TWO_PI * n > T):
        raise DomainError("g_phase needs 2 pi n <= T")
    out = T * np.log(T / (TWO_PI * n)) - T + 0.25 * math.pi
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GExplicitParams:
    """T and the S1 cutoff N (default N = T), constrained to A T < N < A' T."""

    T: float
    N: int | None = None
    A: float = 0.5
    A_prime: float = 2.0

    def __post_init__(self):
        if self.T <= 0:
            raise DomainError("T must be positive")
        if not 0 < self.A < self.A_prime:
            raise DomainError("need 0 < A < A'")
        if self.N is None:
            object.__setattr__(self, "N", int(math.floor(self.T)))
        if not self.A * self.T < self.N < self.A_prime * self.T:
            raise DomainError(f"N = {self.N} outside ({self.A * self.T}, {self.A_prime * self.T})")

    @property
    def N_prime(self) -> float:
        T, N = self.T, self.N
        return T / TWO_PI + N / 2.0 - math.sqrt(N * N / 4.0 + N * T / TWO_PI)


def S1(T: float, N: int, dtable: DivisorTable) -> float:
    dtable.require(N)
    n = np.arange(1, N + 1, dtype=np.float64)
    d = dtable.values()[:N].astype(np.float64)
    sign = np.where(np.arange(1, N + 1) % 2 == 0, 1.0, -1.0)
    ash = np.arcsinh(np.sqrt(math.pi * n / (2.0 * T)))
    amp = sign * d / np.sqrt(n) / (ash * ash) * (T / (TWO_PI * n) + 0.25) ** -0.25
    return 2.0**-1.5 * math.fsum(amp * np.sin(f_phase(T, n)))


def S2(T: float, N_prime: float, dtable: DivisorTable) -> float:
    m = int(math.floor(N_prime))
    if m < 1:
        return 0.0
    dtable.require(m)
    n = np.arange(1, m + 1, dtype=np.float64)
    d = dtable.values()[:m].astype(np.float64)
    lg = np.log(T / (TWO_PI * n))
    return math.fsum(d / np.sqrt(n) / (lg * lg) * np.sin(g_phase(T, n)))


def G_explicit(params: GExplicitParams, dtable: DivisorTable,
               c_rem: float = calibration.C_EXPLICIT) -> EvalResult:
    """S1(T; N) - S2(T; N); abs_err is the calibrated remainder c_rem T^(1/4)."""
    T, N = params.T, params.N
    s1 = S1(T, N, dtable)
    s2 = S2(T, params.N_prime, dtable)
    return EvalResult(s1 - s2, c_rem * T**0.25, n_terms=N + max(0, int(params.N_prime)))


SERIES_AMP = 2.0**-0.25 * math.pi**-0.75


def series_tail_bound(M: int) -> float:
    """Upper estimate of sum_{n > M} d(n) n^(-5/4)."""
    lm = math.log(M)
    return max(8.0 * M**-0.25 * (lm + 2.0), 4.0 * M**-0.25 * (lm + 4.0 + 2.0 * EULER_GAMMA))


def G_series(T: float, M: int, dtable: DivisorTable,
             c_series: float = calibration.C_SERIES) -> EvalResult:
    """Truncated oscillatory series for G(T) with M terms."""
    T, M = float(T), int(M)
    if T <= 0 or M < 1:
        raise DomainError("need T > 0 and M >= 1")
    dtable.require(M)
    n = np.arange(1, M + 1, dtype=np.float64)
    sign = np.where(np.arange(1, M + 1) % 2 == 0, 1.0, -1.0)
    coef = sign * dtable.values()[:M].astype(np.float64) * n**-1.25
    beta = np.sqrt(8.0 * math.pi * n)
    s = float(_backend.sqrt_phase_sum(coef, beta, np.array([T]), -0.25 * math.pi)[0])
    scale = SERIES_AMP * T**0.75
    model = c_series * T ** (2.0 / 3.0) * max(math.log(T), 1.0)
    return EvalResult(scale * s, scale * series_tail_bound(M) + model, n_terms=M)
