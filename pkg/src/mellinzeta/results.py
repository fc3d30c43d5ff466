"""Value types shared by every numerical operation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

Number = Union[float, complex]


@dataclass(frozen=True)
class EvalResult:
    """A value with an absolute error estimate and work counters."""

    value: Number
    abs_err: float
    n_terms: int = 0
    n_evals: int = 0

    def __post_init__(self):
        if self.abs_err < 0 or (math.isnan(self.abs_err)):
            raise ValueError(f"abs_err must be >= 0, got {self.abs_err}")
        if self.n_terms < 0 or self.n_evals < 0:
            raise ValueError("work counters must be non-negative")

    def __float__(self) -> float:
        return float(self.value.real if isinstance(self.value, complex) else self.value)

    def __complex__(self) -> complex:
        return complex(self.value)


@dataclass(frozen=True)
class ComplexPoint:
    """Mellin argument s = sigma + i t, tagged with the strip of the method used."""

    sigma: float
    t: float
    strip: str = ""

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)

    @classmethod
    def from_complex(cls, s: complex, strip: str = "") -> "ComplexPoint":
        s = complex(s)
        return cls(s.real, s.imag, strip)

    def conjugate(self) -> "ComplexPoint":
        return ComplexPoint(self.sigma, -self.t, self.strip)
