"""Measure the Riemann-Siegel remainder envelope c_K = max |R_K(t)| a^(K+3/2), a = sqrt(t/2pi).

Oracle: mpmath.siegelz at 30 digits.  Prints constants to freeze into
mellinzeta.zeta_core.RS_ENVELOPE.
"""
from __future__ import annotations

import math
import sys
from pathlib import Path

import mpmath as mp
import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
from mellinzeta._rs_tables import RS_COEFFS  # noqa: E402

mp.mp.dps = 30
POLY = [np.array(c[::-1]) for c in RS_COEFFS]


def theta(t):
    return (t / 2 * math.log(t / (2 * math.pi)) - t / 2 - math.pi / 8
            + 1 / (48 * t) + 7 / (5760 * t**3) + 31 / (80640 * t**5))


def z_rs(t, order):
    a = math.sqrt(t / (2 * math.pi))
    n = int(a)
    q = a - n - 0.5
    th = theta(t)
    s = math.fsum(math.cos(th - t * math.log(k)) / math.sqrt(k) for k in range(1, n + 1))
    corr = sum(np.polyval(POLY[k], q) * a ** (-k) for k in range(order + 1))
    return 2 * s + (-1) ** (n - 1) * a ** -0.5 * corr


def main():
    ts = np.concatenate([np.linspace(10, 200, 1500), np.linspace(200, 3000, 700)])
    worst = [0.0] * 5
    for t in ts:
        ref = float(mp.siegelz(t))
        a = math.sqrt(t / (2 * math.pi))
        for k in range(5):
            worst[k] = max(worst[k], abs(z_rs(t, k) - ref) * a ** (k + 1.5))
    print("c_K =", [f"{w:.3e}" for w in worst])


if __name__ == "__main__":
    main()
