"""Numerical tools for the Mellin transform Z1(s) = int_1^oo |zeta(1/2 + ix)|^2 x^-s dx.

Modules:
    zeta_core    Hardy's Z(t), theta(t), zeta on the critical line
    arith        divisor-function tables
    quadrature   adaptive Gauss-Kronrod integration and panel tables
    mean_square  E(T), G(T), G1(T), zeros of E and explicit formulas for G
    laplace      the Laplace transform L1 and its small-sigma expansion
    mellin       Z1(s): direct, continued, Laurent data, scans
    cli          command-line front end
"""
from __future__ import annotations

from ._backend import BACKEND
from .errors import (AccuracyError, CapacityError, ConvergenceError, DomainError,
                     GridCoverageError, IllConditionedError, MellinZetaError, NoSignChangeError,
                     PoleError, PoleProximityError, StripError)
from .results import ComplexPoint, EvalResult

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "BACKEND",
    "CapacityError",
    "ComplexPoint",
    "ConvergenceError",
    "DomainError",
    "EvalResult",
    "GridCoverageError",
    "IllConditionedError",
    "MellinZetaError",
    "NoSignChangeError",
    "PoleError",
    "PoleProximityError",
    "StripError",
    "__version__",
]
