"""Arbitrary-precision reference values for the test suite (mpmath only).

Writes tests/oracle_values.py.  Long integrals of Z(x)^2 use fixed 24-point
Gauss-Legendre rules on unit panels at 25 digits; at the ordinates involved
the rule is exact far beyond double precision, so the frozen values carry
no quadrature error a double-precision test could see.

    python3 tools/oracles.py          # about five minutes
"""
from __future__ import annotations

from pathlib import Path

import mpmath as mp

OUT = Path(__file__).resolve().parents[1] / "tests" / "oracle_values.py"
mp.mp.dps = 25


def gauss_legendre(n: int):
    """Nodes and weights of the n-point rule on [-1, 1] via Newton on P_n."""
    xs, ws = [], []
    for k in range(1, n + 1):
        x = mp.cos(mp.pi * (k - mp.mpf(1) / 4) / (n + mp.mpf(1) / 2))
        for _ in range(100):
            p0, p1 = mp.mpf(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < mp.mpf(10) ** (-mp.mp.dps - 2):
                break
        xs.append(x)
        ws.append(2 / ((1 - x * x) * dp * dp))
    return xs, ws


GL_X, GL_W = gauss_legendre(24)


def panel_nodes(a, b):
    h = (mp.mpf(b) - a) / 2
    c = (mp.mpf(b) + a) / 2
    return [c + h * x for x in GL_X], [h * w for w in GL_W]


def zsq_table(a: int, b: int):
    """Nodes, weights and Z^2 on unit panels covering [a, b]."""
    out = []
    for k in range(a, b):
        xs, ws = panel_nodes(k, k + 1)
        out.extend((x, w, mp.siegelz(x) ** 2) for x, w in zip(xs, ws))
    return out


def main_term(T):
    return T * (mp.log(T / (2 * mp.pi)) + 2 * mp.euler - 1)


def main():
    vals: dict[str, object] = {}
    vals["LOG_SQRT_PI"] = mp.log(mp.sqrt(mp.pi))
    vals["LOGGAMMA_2_3I"] = mp.loggamma(mp.mpc(2, 3))
    vals["LOGGAMMA_HALF_40I"] = mp.loggamma(mp.mpc(0.5, 40))
    vals["ZETA_HALF"] = mp.zeta(0.5)
    vals["THETA_100"] = mp.siegeltheta(100)
    vals["THETA_1000"] = mp.siegeltheta(1000)
    vals["Z_14_0"] = mp.siegelz(14.0)
    vals["Z_14_2"] = mp.siegelz(14.2)
    vals["Z_50"] = mp.siegelz(50)
    vals["Z_1000"] = mp.siegelz(1000)
    vals["Z_20000"] = mp.siegelz(20000)
    vals["LAURENT_C1"] = 2 * mp.euler - mp.log(2 * mp.pi)
    vals["MAIN_TERM_100"] = main_term(100)
    vals["A_2"] = mp.taylor(lambda u: u / mp.sin(u) if u else mp.mpf(1), 0, 4)[4] / 16

    z01 = zsq_table(0, 1)
    vals["H_0"] = mp.fsum(w * z for x, w, z in z01)
    vals["H_1"] = mp.fsum(w * z * x for x, w, z in z01)
    vals["H_40"] = mp.fsum(w * z * x**40 for x, w, z in z01)

    z010 = z01 + zsq_table(1, 10)
    vals["E_10"] = mp.fsum(w * z for x, w, z in z010) - main_term(10)
    vals["L1_50"] = mp.fsum(w * z * mp.exp(-50 * x) for x, w, z in zsq_table(0, 2))
    z060 = z010 + zsq_table(10, 60)
    vals["L1_1"] = mp.fsum(w * z * mp.exp(-x) for x, w, z in z060)

    z1k = z060[len(z01):] + zsq_table(60, 1000)
    vals["E_1000"] = vals["H_0"] + mp.fsum(w * z for x, w, z in z1k) - main_term(1000)
    vals["MELLIN_1000_S2"] = mp.fsum(w * z * x**-2 for x, w, z in z1k)
    s = mp.mpc(1.5, 3)
    vals["MELLIN_1000_S15_3"] = mp.fsum(w * z * mp.power(x, -s) for x, w, z in z1k)

    lines = ['"""Reference values frozen from tools/oracles.py (mpmath, 25 digits)."""', ""]
    for k, v in vals.items():
        if isinstance(v, mp.mpc):
            lines.append(f"{k} = complex({mp.nstr(v.real, 17)}, {mp.nstr(v.imag, 17)})")
        else:
            lines.append(f"{k} = {mp.nstr(v, 17)}")
    OUT.write_text("\n".join(lines) + "\n")
    print(OUT.read_text())


if __name__ == "__main__":
    main()
