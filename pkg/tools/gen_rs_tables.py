"""Generate Taylor tables for the Riemann-Siegel correction functions C_0..C_4.

Run once with mpmath; writes src/mellinzeta/_rs_tables.py.  The library never
imports mpmath at runtime.

Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) is entire.  With q = p - 1/2,
Psi = -cos(2 pi q^2 - 5 pi / 8) / cos(2 pi q), expanded as a formal power
series quotient (exact coefficients regardless of the sec radius).
"""
from __future__ import annotations

import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 120
DEG = 110          # Psi series degree before differentiation
KEEP_TOL = mp.mpf("1e-24")   # drop terms below this at |q| <= 1/2


def psi_series(deg: int) -> list:
    pi = mp.pi
    num = [mp.mpf(0)] * (deg + 1)
    c, s = mp.cos(5 * pi / 8), mp.sin(5 * pi / 8)
    # cos(2 pi q^2 - 5pi/8) = c cos(2 pi q^2) + s sin(2 pi q^2)
    for k in range(0, deg // 2 + 1):
        if 2 * k > deg:
            break
        term = (2 * pi) ** k / mp.factorial(k)
        if k % 2 == 0:
            num[2 * k] += c * term * (-1) ** (k // 2)
        else:
            num[2 * k] += s * term * (-1) ** ((k - 1) // 2)
    den = [mp.mpf(0)] * (deg + 1)
    for k in range(0, deg // 2 + 1):
        den[2 * k] = (-1) ** k * (2 * pi) ** (2 * k) / mp.factorial(2 * k)
    out = [mp.mpf(0)] * (deg + 1)
    for n in range(deg + 1):
        acc = num[n]
        for j in range(1, n + 1):
            acc -= den[j] * out[n - j]
        out[n] = acc / den[0]
    return [-v for v in out]


def deriv(coeffs: list, k: int) -> list:
    out = list(coeffs)
    for _ in range(k):
        out = [out[i] * i for i in range(1, len(out))]
    return out


def combine(terms) -> list:
    n = max(len(c) for _, c in terms)
    out = [mp.mpf(0)] * n
    for w, c in terms:
        for i, v in enumerate(c):
            out[i] += w * v
    return out


def trim(c: list) -> list:
    last = 0
    for i, v in enumerate(c):
        if abs(v) * mp.mpf(0.5) ** i > KEEP_TOL:
            last = i
    return c[: last + 1]


def main(dest: Path) -> None:
    pi = mp.pi
    psi = psi_series(DEG)
    d = {k: deriv(psi, k) for k in range(13)}
    tables = [
        psi,
        combine([(-1 / (96 * pi**2), d[3])]),
        combine([(1 / (64 * pi**2), d[2]), (1 / (18432 * pi**4), d[6])]),
        combine([
            (-1 / (64 * pi**2), d[1]),
            (-1 / (3840 * pi**4), d[5]),
            (-1 / (5308416 * pi**6), d[9]),
        ]),
        combine([
            (1 / (128 * pi**2), d[0]),
            (mp.mpf(19) / (24576 * pi**4), d[4]),
            (mp.mpf(11) / (5898240 * pi**6), d[8]),
            (1 / (2038431744 * pi**8), d[12]),
        ]),
    ]
    lines = [
        '"""Taylor coefficients in q = p - 1/2 of the Riemann-Siegel corrections C_0..C_4.',
        "",
        "Generated by tools/gen_rs_tables.py; do not edit by hand.",
        '"""',
        "",
        "RS_COEFFS = (",
    ]
    for tab in tables:
        tab = trim(tab)
        lines.append("    (")
        for v in tab:
            lines.append(f"        {mp.nstr(v, 20, min_fixed=-1, max_fixed=-1)},")
        lines.append("    ),")
    lines.append(")")
    dest.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    root = Path(__file__).resolve().parents[1]
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else root / "src" / "mellinzeta" / "_rs_tables.py")
