"""Kernel selection: the compiled extension when importable, else numpy.

Set ``MELLINZETA_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
kernels = _kernels_py
kernels_py = _kernels_py

if os.environ.get("MELLINZETA_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        kernels = _compiled
        BACKEND = "cython"

rs_main_sum = kernels.rs_main_sum
divisor_counts = kernels.divisor_counts
compensated_cumsum = kernels.compensated_cumsum
mellin_sums = kernels.mellin_sums
mellin_sums_equi = kernels.mellin_sums_equi
sqrt_phase_sum = kernels.sqrt_phase_sum

__all__ = [
    "BACKEND",
    "compensated_cumsum",
    "divisor_counts",
    "kernels",
    "mellin_sums",
    "mellin_sums_equi",
    "rs_main_sum",
    "sqrt_phase_sum",
]
