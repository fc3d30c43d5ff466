# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.  Every function has a numpy twin in ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, log, sqrt, fabs, floor

cnp.import_array()

cdef double TWO_PI = 6.283185307179586


cdef inline void _neumaier(double *s, double *c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def rs_main_sum(double[::1] t, double[::1] theta):
    """sum_{n <= floor(sqrt(t/2pi))} n^-1/2 cos(theta - t log n), compensated."""
    cdef Py_ssize_t m = t.shape[0], j, n, nmax = 1, nt
    cdef double s, c, tj, th
    for j in range(m):
        nt = <Py_ssize_t> floor(sqrt(t[j] / TWO_PI))
        if nt > nmax:
            nmax = nt
    cdef double[::1] logn = np.log(np.arange(1, nmax + 1, dtype=np.float64))
    cdef double[::1] rsq = 1.0 / np.sqrt(np.arange(1, nmax + 1, dtype=np.float64))
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for j in range(m):
            tj = t[j]
            th = theta[j]
            nt = <Py_ssize_t> floor(sqrt(tj / TWO_PI))
            s = 0.0
            c = 0.0
            for n in range(nt):
                _neumaier(&s, &c, rsq[n] * cos(th - tj * logn[n]))
            o[j] = s + c
    return out


def divisor_counts(Py_ssize_t n_max):
    """d(n) for 0 <= n <= n_max (d(0) = 0)."""
    out = np.zeros(n_max + 1, dtype=np.uint32)
    cdef cnp.uint32_t[::1] d = out
    cdef Py_ssize_t k, m
    with nogil:
        for k in range(1, n_max + 1):
            m = k
            while m <= n_max:
                d[m] += 1
                m += k
    return out


def compensated_cumsum(double[::1] x):
    """Prefix sums with Neumaier compensation; out[0] = 0, len(out) = len(x) + 1."""
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] o = out
    cdef double s = 0.0, c = 0.0
    with nogil:
        o[0] = 0.0
        for i in range(n):
            _neumaier(&s, &c, x[i])
            o[i + 1] = s + c
    return out


def mellin_sums(double[::1] amp, double[::1] logx, double[::1] t):
    """For each t_j: sum_i amp_i exp(-i t_j logx_i), returned as (re, im)."""
    cdef Py_ssize_t m = t.shape[0], n = amp.shape[0], i, j
    cdef double sr, cr, si, ci, ph, tj
    re = np.empty(m, dtype=np.float64)
    im = np.empty(m, dtype=np.float64)
    cdef double[::1] r = re
    cdef double[::1] q = im
    with nogil:
        for j in range(m):
            tj = t[j]
            sr = 0.0
            cr = 0.0
            si = 0.0
            ci = 0.0
            for i in range(n):
                ph = tj * logx[i]
                _neumaier(&sr, &cr, amp[i] * cos(ph))
                _neumaier(&si, &ci, -amp[i] * sin(ph))
            r[j] = sr + cr
            q[j] = si + ci
    return re, im


def sqrt_phase_sum(double[::1] coef, double[::1] beta, double[::1] x, double phase):
    """For each x_j: sum_n coef_n sin(beta_n sqrt(x_j) + phase)."""
    cdef Py_ssize_t m = x.shape[0], n = coef.shape[0], i, j
    cdef double s, c, rx
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for j in range(m):
            rx = sqrt(x[j])
            s = 0.0
            c = 0.0
            for i in range(n):
                _neumaier(&s, &c, coef[i] * sin(beta[i] * rx + phase))
            o[j] = s + c
    return out


def mellin_sums_equi(double[::1] amp, double[::1] logx, double t0, double dt, Py_ssize_t n):
    """sum_i amp_i exp(-i (t0 + k dt) logx_i) for k = 0..n-1, as (re, im).

    The phase is advanced by complex multiplication; partial sums over blocks
    of nodes are folded into Neumaier accumulators.
    """
    cdef Py_ssize_t m = amp.shape[0], i, k, i0, i1
    cdef Py_ssize_t block = 2048
    re = np.zeros(n, dtype=np.float64)
    im = np.zeros(n, dtype=np.float64)
    cdef double[::1] r = re
    cdef double[::1] q = im
    cdef double[::1] cr = np.zeros(n, dtype=np.float64)
    cdef double[::1] ci = np.zeros(n, dtype=np.float64)
    cdef double[::1] br = np.zeros(n, dtype=np.float64)
    cdef double[::1] bi = np.zeros(n, dtype=np.float64)
    cdef double zr, zi, wr, wi, tmp, a
    with nogil:
        i0 = 0
        while i0 < m:
            i1 = i0 + block
            if i1 > m:
                i1 = m
            for k in range(n):
                br[k] = 0.0
                bi[k] = 0.0
            for i in range(i0, i1):
                a = amp[i]
                zr = a * cos(t0 * logx[i])
                zi = -a * sin(t0 * logx[i])
                wr = cos(dt * logx[i])
                wi = -sin(dt * logx[i])
                for k in range(n):
                    br[k] += zr
                    bi[k] += zi
                    tmp = zr * wr - zi * wi
                    zi = zr * wi + zi * wr
                    zr = tmp
            for k in range(n):
                _neumaier(&r[k], &cr[k], br[k])
                _neumaier(&q[k], &ci[k], bi[k])
            i0 = i1
        for k in range(n):
            r[k] += cr[k]
            q[k] += ci[k]
    return re, im
