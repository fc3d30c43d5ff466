"""Empirical constants for remainder terms that are only known up to O(.).

Each value is a measured supremum, rounded up and doubled for headroom.
``tools/calibrate.py`` regenerates the measurements; the ranges are noted
beside each constant.
"""
from __future__ import annotations

# |E(x)| <= C_E * x^(1/3), x in [10, 1e5]
C_E = 17.0
E_EXPONENT = 1.0 / 3.0

# |G(x)| <= C_G * x^(3/4), x in [10, 1e5]
C_G = 4.6

# |G1(x)| <= C_G1 * x^(5/4), x in [10, 1e5]
C_G1 = 1.1

# |G(T) - (S1 - S2)| <= C_EXPLICIT * T^(1/4), N = floor(T), T in [50, 5000]
C_EXPLICIT = 0.86

# |G(T) - series(T)| <= C_SERIES * T^(2/3) * log T, M = 1e5, T in [50, 5000]
C_SERIES = 0.46

# |L1(x) - (log(1/x) + gamma - log 2pi)(1/x + x/24) - pi| <= C_KOBER * x, x in [1e-3, 0.1]
C_KOBER = 1.5
