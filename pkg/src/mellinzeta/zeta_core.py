"""zeta(1/2 + it), Hardy's Z(t), the Riemann-Siegel theta function and log Gamma.

Two independent evaluation paths are provided for the critical line:

* Euler-Maclaurin summation, accurate for any t but O(t) per point;
* the Riemann-Siegel formula with up to four correction terms, O(sqrt t).

``method="auto"`` picks Riemann-Siegel only where its calibrated remainder
envelope meets the requested tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _backend
from ._rs_tables import RS_COEFFS
from .errors import AccuracyError, DomainError, PoleError
from .results import ComplexPoint, EvalResult

EULER_GAMMA = 0.57721566490153286061
LOG_2PI = 1.8378770664093454836
LOG_PI = 1.1447298858494001741
TWO_PI = 2.0 * math.pi
EPS = 2.220446049250313e-16

# max |R_K(t)| * a^(K + 3/2), a = sqrt(t / 2pi), measured against a 30-digit
# oracle on t in [10, 3000] (tools/calibrate_rs.py) and doubled.
RS_ENVELOPE = (6.2e-2, 1.2e-2, 1.2e-3, 1.0e-3, 3.1e-4)

THETA_SWITCH = 20.0

_RS_POLY = tuple(np.asarray(c[::-1], dtype=np.float64) for c in RS_COEFFS)

_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN = 12.0


@dataclass(frozen=True)
class ZetaOptions:
    """Evaluation controls for the critical-line routines.

    ``tol`` is the absolute accuracy the Riemann-Siegel path must certify
    before ``auto`` uses it (and before an explicit request is honoured).
    """

    method: str = "auto"
    rs_correction_order: int = 4
    em_terms: int = 12
    t_switch: float = 30.0
    tol: float = 1e-8

    def __post_init__(self):
        if self.method not in ("auto", "riemann_siegel", "euler_maclaurin"):
            raise DomainError(f"unknown method {self.method!r}")
        if not 0 <= self.rs_correction_order <= 4:
            raise DomainError("rs_correction_order must lie in [0, 4]")
        if self.em_terms < 10:
            raise DomainError("em_terms must be >= 10")
        if self.t_switch <= 0 or self.tol <= 0:
            raise DomainError("t_switch and tol must be positive")


DEFAULT_OPTIONS = ZetaOptions()


# ---------------------------------------------------------------- log Gamma

def _log_gamma_array(z: np.ndarray) -> np.ndarray:
    """Principal log Gamma for complex arrays away from the poles."""
    z = np.asarray(z, dtype=np.complex128)
    shift = np.maximum(0, np.ceil(_STIRLING_MIN - z.real)).astype(np.int64)
    acc = np.zeros_like(z)
    w = z.copy()
    for k in range(int(shift.max()) if z.size else 0):
        live = shift > k
        acc = acc - np.where(live, np.log(np.where(live, w, 1.0)), 0.0)
        w = np.where(live, w + 1.0, w)
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    series *= inv
    return acc + (w - 0.5) * np.log(w) - w + 0.5 * LOG_2PI + series


def log_gamma(s) -> EvalResult:
    """Principal branch of log Gamma(s) for complex s off the non-positive integers."""
    if isinstance(s, ComplexPoint):
        s = s.s
    s = complex(s)
    n = round(s.real)
    if n <= 0 and abs(s - n) <= 1e-12:
        raise PoleError(f"log Gamma has a pole at s = {n}")
    value = complex(_log_gamma_array(np.array([s]))[0])
    shift = max(0, math.ceil(_STIRLING_MIN - s.real))
    w = s + shift
    scale = abs(w * np.log(w)) + abs(w) + shift * (abs(np.log(w)) + 1.0)
    return EvalResult(value, 8.0 * EPS * scale + 1e-18, n_terms=len(_STIRLING), n_evals=shift + 1)


# ---------------------------------------------------------------- theta

def _theta_series(t: np.ndarray) -> np.ndarray:
    inv = 1.0 / t
    inv2 = inv * inv
    tail = inv * (1 / 48 + inv2 * (7 / 5760 + inv2 * (31 / 80640 + inv2 * (127 / 430080))))
    return 0.5 * t * np.log(t / TWO_PI) - 0.5 * t - math.pi / 8 + tail


def _theta_exact(t: np.ndarray) -> np.ndarray:
    return _log_gamma_array(0.25 + 0.5j * t).imag - 0.5 * t * LOG_PI


def theta_array(t) -> np.ndarray:
    """Vectorized theta(t) extended to t < 0 by oddness."""
    t = np.asarray(t, dtype=np.float64)
    a = np.abs(t)
    out = np.empty_like(a)
    fast = a >= THETA_SWITCH
    if fast.any():
        out[fast] = _theta_series(a[fast])
    if (~fast).any():
        out[~fast] = _theta_exact(a[~fast])
    return np.where(t < 0, -out, out)


def _theta_err(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    big = np.maximum(a, THETA_SWITCH)
    rounding = 4.0 * EPS * (0.5 * a * np.abs(np.log(np.maximum(a, 1e-300) / TWO_PI)) + a + 1.0)
    trunc = np.where(a >= THETA_SWITCH, 511.0 / 1216512.0 / big**9, 0.0)
    return rounding + trunc + 1e-15


def rs_theta(t: float) -> EvalResult:
    """theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi, with an asymptotic fast path for t >= 20."""
    t = float(t)
    if t < 0:
        r = rs_theta(-t)
        return EvalResult(-r.value, r.abs_err, r.n_terms, r.n_evals)
    if t == 0:
        return EvalResult(0.0, 0.0)
    val = float(theta_array(np.array([t]))[0])
    return EvalResult(val, float(_theta_err(np.array([t]))[0]), n_terms=5 if t >= THETA_SWITCH else 8, n_evals=1)


# ---------------------------------------------------------------- Euler-Maclaurin

@lru_cache(maxsize=None)
def _bernoulli_even(m: int) -> tuple[float, ...]:
    """B_2k / (2k)! for k = 1..m."""
    a = [Fraction(0)] * (2 * m + 2)
    b = []
    for n in range(2 * m + 1):
        a[n] = Fraction(1, n + 1)
        for j in range(n, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        b.append(a[0])
    return tuple(float(b[2 * k] / math.factorial(2 * k)) for k in range(1, m + 1))


def _em_cutoff(t: np.ndarray, m: int) -> np.ndarray:
    return np.maximum(10, np.ceil((np.abs(t) + 2 * m + 1) / (0.25 * TWO_PI))).astype(np.int64)


def zeta_em_array(t, em_terms: int = 12) -> tuple[np.ndarray, np.ndarray]:
    """zeta(1/2 + it) by Euler-Maclaurin; returns (values, error bounds)."""
    t = np.asarray(t, dtype=np.float64)
    s = 0.5 + 1j * t
    m = em_terms
    ncut = _em_cutoff(t, m)
    re_s = np.zeros(t.shape)
    re_c = np.zeros(t.shape)
    im_s = np.zeros(t.shape)
    im_c = np.zeros(t.shape)
    for n in range(1, int(ncut.max()) if t.size else 1):
        live = n < ncut
        mag = np.where(live, n**-0.5, 0.0)
        ph = t * math.log(n)
        re_s, re_c = _backend.kernels_py.neumaier_step(re_s, re_c, mag * np.cos(ph))
        im_s, im_c = _backend.kernels_py.neumaier_step(im_s, im_c, -mag * np.sin(ph))
    acc = (re_s + re_c) + 1j * (im_s + im_c)
    nf = ncut.astype(np.float64)
    logn = np.log(nf)
    n_pow = np.exp(-s * logn)
    acc = acc + nf * n_pow / (s - 1.0) + 0.5 * n_pow
    bern = _bernoulli_even(m + 1)
    poch = s * n_pow / nf
    for k in range(m):
        acc = acc + bern[k] * poch
        poch = poch * (s + 2 * k + 1) * (s + 2 * k + 2) / (nf * nf)
    # first omitted term, inflated by |s + 2m + 1| / (sigma + 2m + 1)
    err = np.abs(bern[m] * poch) * np.abs(s + 2 * m + 1) / (0.5 + 2 * m + 1)
    err = err + 8.0 * EPS * np.sqrt(nf) * (np.abs(t) * logn + 2.0)
    return acc, err


# ---------------------------------------------------------------- Riemann-Siegel

def rs_error_bound(t, order: int) -> np.ndarray:
    """Calibrated remainder envelope plus a rounding term for the Riemann-Siegel path."""
    t = np.asarray(t, dtype=np.float64)
    a = np.sqrt(t / TWO_PI)
    n = np.floor(a)
    trunc = RS_ENVELOPE[order] * a ** (-(order + 1.5))
    rounding = 4.0 * EPS * np.sqrt(n) * (t * np.log(n + 1.0) + np.abs(theta_array(t)) + 1.0)
    return trunc + rounding


def hardy_z_rs_array(t, order: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Z(t) by Riemann-Siegel with ``order`` corrections; t >= 2pi."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    th = theta_array(t)
    main = _backend.rs_main_sum(t, np.ascontiguousarray(th))
    a = np.sqrt(t / TWO_PI)
    n = np.floor(a)
    q = a - n - 0.5
    corr = np.zeros_like(t)
    inv_a = 1.0 / a
    for k in range(order, -1, -1):
        corr = corr * inv_a + np.polyval(_RS_POLY[k], q)
    sign = np.where(n.astype(np.int64) % 2 == 1, 1.0, -1.0)
    z = 2.0 * main + sign * corr / np.sqrt(a)
    return z, rs_error_bound(t, order)


def _use_rs(t: np.ndarray, opts: ZetaOptions) -> np.ndarray:
    if opts.method == "euler_maclaurin":
        return np.zeros(t.shape, dtype=bool)
    ok = t >= TWO_PI
    if opts.method == "riemann_siegel":
        return ok
    with np.errstate(divide="ignore", invalid="ignore"):
        bound = rs_error_bound(np.maximum(t, TWO_PI), opts.rs_correction_order)
    return ok & (t >= opts.t_switch) & (bound <= opts.tol)


def _check_domain(t: np.ndarray, opts: ZetaOptions) -> None:
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise DomainError("t must be finite and >= 0")
    if opts.method == "riemann_siegel":
        if np.any(t < TWO_PI):
            raise AccuracyError("Riemann-Siegel needs t >= 2*pi")
        bound = rs_error_bound(t, opts.rs_correction_order)
        if np.any(bound > opts.tol):
            worst = float(t[np.argmax(bound)])
            raise AccuracyError(
                f"Riemann-Siegel order {opts.rs_correction_order} cannot reach "
                f"{opts.tol:g} at t = {worst:g} (bound {float(bound.max()):.2e})"
            )


def hardy_z_array(t, opts: ZetaOptions = DEFAULT_OPTIONS) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Z(t) with per-point error bounds."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    _check_domain(t, opts)
    z = np.empty_like(t)
    err = np.empty_like(t)
    rs = _use_rs(t, opts)
    if rs.any():
        z[rs], err[rs] = hardy_z_rs_array(t[rs], opts.rs_correction_order)
    em = ~rs
    if em.any():
        zeta, e = zeta_em_array(t[em], opts.em_terms)
        rot = zeta * np.exp(1j * theta_array(t[em]))
        z[em] = rot.real
        err[em] = e + _theta_err(t[em]) * np.abs(zeta)
    return z, err


def zsq_array(t, opts: ZetaOptions = DEFAULT_OPTIONS) -> np.ndarray:
    """|zeta(1/2 + it)|^2 = Z(t)^2, vectorized, for quadrature integrands."""
    z, _ = hardy_z_array(t, opts)
    return z * z


def zsq_with_err(t, opts: ZetaOptions = DEFAULT_OPTIONS) -> tuple[np.ndarray, np.ndarray]:
    """(Z(t)^2, bound on its evaluation error), the form quadrature accepts."""
    z, err = hardy_z_array(t, opts)
    return z * z, err * (2.0 * np.abs(z) + err)


def hardy_Z(t: float, opts: ZetaOptions = DEFAULT_OPTIONS) -> EvalResult:
    """Hardy's function Z(t) = exp(i theta(t)) zeta(1/2 + it), real for real t."""
    t = float(t)
    z, err = hardy_z_array(np.array([t]), opts)
    rs = bool(_use_rs(np.array([t]), opts)[0])
    n_terms = int(math.sqrt(t / TWO_PI)) if rs else int(_em_cutoff(np.array([t]), opts.em_terms)[0])
    return EvalResult(float(z[0]), float(err[0]), n_terms=n_terms, n_evals=1)


def zeta_half(t: float, opts: ZetaOptions = DEFAULT_OPTIONS) -> EvalResult:
    """zeta(1/2 + it) = Z(t) exp(-i theta(t))."""
    t = float(t)
    z = hardy_Z(t, opts)
    th = rs_theta(t)
    value = z.value * complex(math.cos(th.value), -math.sin(th.value))
    return EvalResult(value, z.abs_err + abs(z.value) * th.abs_err, z.n_terms, z.n_evals)
