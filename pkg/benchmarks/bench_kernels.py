"""Time the compiled kernels against their numpy fallbacks on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Also reports the largest difference between the two outputs, so a speedup
never hides a disagreement.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from mellinzeta import _backend, _kernels_py

try:
    from mellinzeta import _kernels as compiled
except ImportError:
    compiled = None


def cases(rng: np.random.Generator):
    t = np.sort(rng.uniform(1e3, 1e5, 2000))
    theta = rng.uniform(-1e3, 1e3, t.size)
    n = 200_000
    amp = rng.standard_normal(n)
    logx = np.log(rng.uniform(1.0, 4e4, n))
    ts = np.linspace(10.0, 30.0, 20)
    coef = rng.standard_normal(20_000) / np.arange(1, 20_001) ** 1.25
    beta = np.sqrt(8 * np.pi * np.arange(1, 20_001))
    xs = np.linspace(100.0, 5000.0, 50)
    cum = rng.standard_normal(200_000)
    return [
        ("rs_main_sum", "rs_main_sum", (t, theta)),
        ("mellin_sums", "mellin_sums", (amp, logx, ts)),
        ("mellin_sums_equi", "mellin_sums_equi", (amp, logx, 10.0, 20.0 / 19, 20)),
        ("sqrt_phase_sum", "sqrt_phase_sum", (coef, beta, xs, -np.pi / 4)),
        ("compensated_cumsum", "compensated_cumsum", (cum,)),
        ("divisor_counts", "divisor_counts", (2_000_000,)),
    ]


def best_of(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def max_diff(a, b) -> float:
    a = a if isinstance(a, tuple) else (a,)
    b = b if isinstance(b, tuple) else (b,)
    return max(float(np.max(np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))))
               for x, y in zip(a, b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"active backend: {_backend.BACKEND}")
    if compiled is None:
        print("compiled extension not built; only the numpy timings are shown")
    rng = np.random.default_rng(0)
    print(f"{'kernel':20s} {'numpy [s]':>11s} {'cython [s]':>11s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, attr, a in cases(rng):
        tp, op = best_of(getattr(_kernels_py, attr), a, args.repeat)
        if compiled is None:
            print(f"{name:20s} {tp:11.4f}")
            continue
        tc, oc = best_of(getattr(compiled, attr), a, args.repeat)
        print(f"{name:20s} {tp:11.4f} {tc:11.4f} {tp / tc:8.1f} {max_diff(op, oc):11.2e}")


if __name__ == "__main__":
    main()
