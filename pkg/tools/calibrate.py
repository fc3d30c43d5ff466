"""Measure the empirical constants in mellinzeta.calibration.

Each constant is the supremum of a normalised error over its stated range;
the frozen value is that supremum doubled and rounded up to two significant
digits.  ``--write`` rewrites calibration.py in place.

    python3 tools/calibrate.py [--x-max 1e5] [--write]
"""
from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from mellinzeta import mean_square as ms  # noqa: E402
from mellinzeta.arith import divisor_sieve  # noqa: E402
from mellinzeta.laplace import L1  # noqa: E402
from mellinzeta.zeta_core import EULER_GAMMA, TWO_PI  # noqa: E402

TARGET = ROOT / "src" / "mellinzeta" / "calibration.py"


def headroom(v: float) -> float:
    v = 2.0 * v
    digits = 1 - int(math.floor(math.log10(v)))
    return math.ceil(v * 10**digits) / 10**digits


def grid_sups(x_max: float):
    """sup |E|/x^(1/3), |G|/x^(3/4), |G1|/x^(5/4) over the table grid points in [10, x_max]."""
    table = ms.shared_table()
    table.ensure(x_max)
    step = table.step
    i = np.arange(int(math.ceil(10 / step)), min(int(x_max / step), table.grid.n_cells - 1) + 1)
    T = i * step
    m0 = table.grid.prefix[i]
    m1 = table._p1[i]
    m2 = table._p2[i]
    L = np.log(T / TWO_PI) + ms.MAIN_CONST
    E = m0 - T * L
    G = T * m0 - m1 - (0.5 * T * T * L - 0.25 * T * T) - math.pi * T
    G1 = 0.5 * (T * T * m0 - 2 * T * m1 + m2) - (T**3 / 6 * L - 5 * T**3 / 36) - 0.5 * math.pi * T * T
    # inside a cell E moves by at most its Z^2 mass or its main-term drop
    drift = np.maximum(table.grid.cell_values[i], step * np.maximum(L, 0.0))
    return (float(np.max((np.abs(E) + drift) / T ** (1 / 3))),
            float(np.max(np.abs(G) / T**0.75)),
            float(np.max(np.abs(G1) / T**1.25)))


def explicit_sups(T_values, M: int):
    dtable = divisor_sieve(max(M, int(2 * max(T_values)) + 10))
    c_exp = c_ser = 0.0
    for T in T_values:
        g = ms.G_quad(T).value
        ge = ms.G_explicit(ms.GExplicitParams(T), dtable).value
        gs = ms.G_series(T, M, dtable).value
        c_exp = max(c_exp, abs(g - ge) / T**0.25)
        c_ser = max(c_ser, abs(g - gs) / (T ** (2 / 3) * math.log(T)))
    return c_exp, c_ser


def kober_sup(xs):
    worst = 0.0
    for x in xs:
        lg = math.log(1 / x) + EULER_GAMMA - math.log(TWO_PI)
        model = lg * (1 / x + x / 24) + math.pi
        worst = max(worst, abs(L1(x).value - model) / x)
    return worst


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x-max", type=float, default=1e5)
    ap.add_argument("--series-M", type=int, default=100_000)
    ap.add_argument("--write", action="store_true")
    args = ap.parse_args(argv)

    c_e, c_g, c_g1 = grid_sups(args.x_max)
    T_values = [float(v) for v in np.geomspace(50, 5000, 25)]
    c_exp, c_ser = explicit_sups(T_values, args.series_M)
    c_kob = kober_sup(np.geomspace(1e-3, 0.1, 15))
    measured = {"C_E": c_e, "C_G": c_g, "C_G1": c_g1, "C_EXPLICIT": c_exp,
                "C_SERIES": c_ser, "C_KOBER": c_kob}
    frozen = {k: headroom(v) for k, v in measured.items()}
    for k in measured:
        print(f"{k:11s} measured {measured[k]:.6g}  frozen {frozen[k]:g}")
    if args.write:
        text = TARGET.read_text()
        for k, v in frozen.items():
            text = re.sub(rf"^{k} = .*$", f"{k} = {v!r}", text, flags=re.M)
        TARGET.write_text(text)
        print(f"wrote {TARGET}")


if __name__ == "__main__":
    main()
