"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and the same compensated summation, vectorized across the
outer index instead of looping.
"""
from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi
_CHUNK = 1 << 20


def neumaier_step(s, c, x):
    t = s + x
    big = np.abs(s) >= np.abs(x)
    c = c + np.where(big, (s - t) + x, (x - t) + s)
    return t, c


def rs_main_sum(t, theta):
    t = np.ascontiguousarray(t, dtype=np.float64)
    theta = np.ascontiguousarray(theta, dtype=np.float64)
    nt = np.floor(np.sqrt(t / TWO_PI)).astype(np.int64)
    s = np.zeros_like(t)
    c = np.zeros_like(t)
    nmax = int(nt.max()) if t.size else 0
    for n in range(1, nmax + 1):
        live = nt >= n
        term = np.where(live, np.cos(theta - t * np.log(n)) / np.sqrt(n), 0.0)
        s, c = neumaier_step(s, c, term)
    return s + c


def divisor_counts(n_max):
    d = np.zeros(n_max + 1, dtype=np.uint32)
    for k in range(1, n_max + 1):
        d[k::k] += 1
    return d


def compensated_cumsum(x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty(x.size + 1)
    out[0] = 0.0
    s = c = 0.0
    # scalar loop: the compensation is inherently sequential
    for i, v in enumerate(x.tolist()):
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i + 1] = s + c
    return out


def _pairwise(v, axis=-1):
    # numpy's sum is pairwise along contiguous axes: O(log n) error growth
    return np.sum(v, axis=axis)


def mellin_sums(amp, logx, t):
    amp = np.ascontiguousarray(amp, dtype=np.float64)
    logx = np.ascontiguousarray(logx, dtype=np.float64)
    t = np.ascontiguousarray(t, dtype=np.float64)
    re = np.empty(t.size)
    im = np.empty(t.size)
    step = max(1, _CHUNK // max(amp.size, 1))
    for j0 in range(0, t.size, step):
        tj = t[j0:j0 + step, None]
        ph = tj * logx[None, :]
        re[j0:j0 + step] = _pairwise(amp * np.cos(ph))
        im[j0:j0 + step] = -_pairwise(amp * np.sin(ph))
    return re, im


def sqrt_phase_sum(coef, beta, x, phase):
    coef = np.ascontiguousarray(coef, dtype=np.float64)
    beta = np.ascontiguousarray(beta, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty(x.size)
    step = max(1, _CHUNK // max(coef.size, 1))
    rx = np.sqrt(x)
    for j0 in range(0, x.size, step):
        ph = beta[None, :] * rx[j0:j0 + step, None] + phase
        out[j0:j0 + step] = _pairwise(coef * np.sin(ph))
    return out


def mellin_sums_equi(amp, logx, t0, dt, n):
    amp = np.ascontiguousarray(amp, dtype=np.float64)
    logx = np.ascontiguousarray(logx, dtype=np.float64)
    z = amp * np.exp(-1j * t0 * logx)
    w = np.exp(-1j * dt * logx)
    re = np.empty(n)
    im = np.empty(n)
    for k in range(n):
        s = np.sum(z)
        re[k] = s.real
        im[k] = s.imag
        z = z * w
    return re, im
