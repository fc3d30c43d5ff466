"""Laplace transform of |zeta(1/2 + ix)|^2 and its small-sigma expansion.

With sigma = 1/T the expansion reads

    L1(1/T) ~ (log(T/2pi) + gamma) sum_n a_n T^(1-2n) + sum_n b_n T^(-p n),

where the a_n are exact rationals (the u/sin u coefficients scaled by 4^-n)
and b_0 = pi.  The higher b_n are only available by fitting.  Kober's power
series in sigma has every power (p = 1, the default ``basis="kober"``); the
even-only variant (p = 2) is kept as ``basis="even"``.  Numerically the
T^-1 coefficient is clearly non-zero (about -2/3), so the even basis cannot
absorb it.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import calibration
from .errors import DomainError, IllConditionedError
from .mean_square import ZetaSquareTable, shared_table
from .quadrature import DEFAULT_SPEC, QuadSpec, integrate
from .results import EvalResult
from .zeta_core import EPS, EULER_GAMMA, TWO_PI, zsq_with_err

A_MAX = 20
BASES = {"kober": 1, "even": 2}
COND_LIMIT = 1e10
DIRECT_CUTOFF = 256.0  # below this X_c adaptive quadrature beats the shared table


def cutoff(sigma: float) -> float:
    """X_c = (40 + 2 log(1/sigma)) / sigma, so exp(-sigma X_c) = exp(-40) sigma^2."""
    return max((40.0 + 2.0 * math.log(1.0 / sigma)) / sigma, 30.0 / sigma)


def tail_bound(sigma: float, X: float) -> float:
    """int_X^oo (log(x/2pi) + 3) exp(-sigma x) dx, with E1(z) <= exp(-z)/z."""
    z = sigma * X
    return math.exp(-z) / sigma * (max(math.log(X / TWO_PI), 0.0) + 3.0 + 1.0 / z)


def _laplace_piece(sigma: float, lo: float, hi: float, table: ZetaSquareTable | None,
                   spec: QuadSpec) -> EvalResult:
    if hi <= DIRECT_CUTOFF:
        def f(x):
            v, e = zsq_with_err(x)
            w = np.exp(-sigma * x)
            return v * w, e * w
        return integrate(f, lo, hi, spec)
    table = shared_table() if table is None else table
    return table.weighted_integral(lambda x: np.exp(-sigma * x), lo, hi)


def L1(sigma: float, spec: QuadSpec = DEFAULT_SPEC, table: ZetaSquareTable | None = None) -> EvalResult:
    """int_0^oo Z(x)^2 exp(-sigma x) dx."""
    sigma = float(sigma)
    if not sigma > 0:
        raise DomainError("L1 needs sigma > 0")
    X = cutoff(sigma)
    r = _laplace_piece(sigma, 0.0, X, table, spec)
    if X > DIRECT_CUTOFF:
        # the table rounds X up to a cell edge; the tail starts there
        step = (shared_table() if table is None else table).step
        X = math.ceil(X / step - 1e-9) * step
    err = r.abs_err + tail_bound(sigma, X) + 8 * EPS * abs(r.value)
    return EvalResult(r.value, err, n_terms=r.n_terms, n_evals=r.n_evals)


def kober_main(T: float) -> float:
    """T (log(T/2pi) + gamma)."""
    return T * (math.log(T / TWO_PI) + EULER_GAMMA)


def kober_residual(T: float, spec: QuadSpec = DEFAULT_SPEC, table: ZetaSquareTable | None = None) -> EvalResult:
    """L1(1/T) - T (log(T/2pi) + gamma); tends to pi."""
    T = float(T)
    if T < 10:
        raise DomainError("kober_residual needs T >= 10")
    r = L1(1.0 / T, spec, table)
    main = kober_main(T)
    return EvalResult(r.value - main, r.abs_err + 4 * EPS * abs(main), r.n_terms, r.n_evals)


def L1_bar(x: float, spec: QuadSpec = DEFAULT_SPEC, table: ZetaSquareTable | None = None) -> EvalResult:
    """int_1^oo Z(y)^2 exp(-x y) dy, as L1(x) minus the [0, 1] piece."""
    x = float(x)
    if not x > 0:
        raise DomainError("L1_bar needs x > 0")
    full = L1(x, spec, table)
    head = _laplace_piece(x, 0.0, 1.0, None, spec)
    return EvalResult(full.value - head.value, full.abs_err + head.abs_err + 4 * EPS * abs(full.value),
                      full.n_terms, full.n_evals + head.n_evals)


# ---------------------------------------------------------------- coefficients

def _u_over_sin(n_terms: int) -> list[Fraction]:
    """beta_k with u / sin u = sum beta_k u^(2k), by inverting sin(u)/u."""
    s = [Fraction((-1) ** k, math.factorial(2 * k + 1)) for k in range(n_terms)]
    beta = [Fraction(1)]
    for k in range(1, n_terms):
        beta.append(-sum(s[j] * beta[k - j] for j in range(1, k + 1)))
    return beta


def a_coefficients(N: int) -> tuple[Fraction, ...]:
    if not 0 <= N <= A_MAX:
        raise DomainError(f"N must lie in [0, {A_MAX}]")
    beta = _u_over_sin(N + 1)
    return tuple(b / 4**k for k, b in enumerate(beta))


@dataclass(frozen=True)
class CoeffTable:
    """a_0..a_N exact, b_0 = pi exact, b_1..b_N fitted (diagnostic only)."""

    a: tuple[Fraction, ...]
    b: tuple[float, ...]
    N: int
    fit_residual: float = 0.0
    b_stderr: tuple[float, ...] = ()
    basis: str = "kober"
    provenance: dict = field(default_factory=lambda: {"b0": "exact", "b>0": "fitted"})

    def __post_init__(self):
        if self.a[0] != 1:
            raise ValueError("a_0 must be exactly 1")
        if self.b and self.b[0] != math.pi:
            raise ValueError("b_0 must be pi")
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")

    def model(self, T: float) -> float:
        """(log(T/2pi) + gamma) sum a_n T^(1-2n) + sum b_n T^(-p n)."""
        p = BASES[self.basis]
        lg = math.log(T / TWO_PI) + EULER_GAMMA
        sa = math.fsum(float(an) * T ** (1 - 2 * n) for n, an in enumerate(self.a))
        sb = math.fsum(bn * T ** (-p * n) for n, bn in enumerate(self.b))
        return lg * sa + sb

    def to_dict(self) -> dict:
        return {
            "a": [{"num": f.numerator, "den": f.denominator} for f in self.a],
            "b": list(self.b),
            "basis": self.basis,
            "b_stderr": list(self.b_stderr),
            "fit_residual": self.fit_residual,
            "provenance": dict(self.provenance),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def a_coeffs(N: int) -> CoeffTable:
    return CoeffTable(a_coefficients(N), (math.pi,), N)


def default_samples(N: int) -> list[float]:
    m = max(2 * N + 3, 8)
    return [float(v) for v in np.geomspace(50.0, 800.0, m)]


def fit_b(N: int, T_samples=None, spec: QuadSpec = DEFAULT_SPEC,
          table: ZetaSquareTable | None = None, basis: str = "kober") -> CoeffTable:
    """Least-squares b_1..b_N against L1(1/T), with a_n and b_0 held exact.

    The design uses columns (T_min / T)^(p n) so its conditioning reflects the
    sample spread rather than the raw scale of T.
    """
    if N < 0:
        raise DomainError("N must be >= 0")
    if basis not in BASES:
        raise DomainError(f"unknown basis {basis!r}")
    p = BASES[basis]
    T = np.sort(np.asarray(default_samples(N) if T_samples is None else T_samples, dtype=np.float64))
    if T.size < 2 * N + 3 or np.any(T < 50):
        raise DomainError("need at least 2N + 3 samples, all >= 50")
    a = a_coefficients(N)
    base = CoeffTable(a, (math.pi,), N, basis=basis)
    r = np.array([L1(1.0 / t, spec, table).value - base.model(t) for t in T])
    if N == 0:
        return CoeffTable(a, (math.pi,), 0, float(np.max(np.abs(r))), basis=basis)
    t_ref = float(T[0])
    A = np.stack([(t_ref / T) ** (p * n) for n in range(1, N + 1)], axis=1)
    cond = float(np.linalg.cond(A))
    if cond > COND_LIMIT:
        raise IllConditionedError(f"design condition number {cond:.3e} exceeds {COND_LIMIT:g}")
    c, *_ = np.linalg.lstsq(A, r, rcond=None)
    resid = r - A @ c
    dof = max(T.size - N, 1)
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.inv(A.T @ A)
    scale = np.array([t_ref ** (p * n) for n in range(1, N + 1)])
    b = (math.pi,) + tuple(float(v) for v in c * scale)
    se = (0.0,) + tuple(float(v) for v in np.sqrt(np.diag(cov)) * scale)
    return CoeffTable(a, b, N, float(np.max(np.abs(resid))), se, basis)


def kober_small_x(x: float) -> tuple[float, float]:
    """Small-x model (log(1/x) + gamma - log 2pi)(1/x + x/24) + pi of L1(x) and its remainder bound."""
    lg = math.log(1.0 / x) + EULER_GAMMA - math.log(TWO_PI)
    return lg * (1.0 / x + x / 24.0) + math.pi, calibration.C_KOBER * x
