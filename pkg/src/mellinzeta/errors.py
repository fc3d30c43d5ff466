"""Exception hierarchy.  Numerical failures carry the best estimate found."""
from __future__ import annotations


class MellinZetaError(Exception):
    """Base class for all package errors."""


class DomainError(MellinZetaError, ValueError):
    """Argument outside the domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at (or within 1e-12 of) a pole."""


class StripError(DomainError):
    """Mellin argument outside the validity strip of the chosen method."""


class PoleProximityError(DomainError):
    """Mellin argument inside the exclusion disc around s = 1."""


class CapacityError(MellinZetaError, MemoryError):
    """A table would exceed its configured size budget."""


class AccuracyError(MellinZetaError, ArithmeticError):
    """The requested method cannot reach the declared accuracy here."""


class ConvergenceError(MellinZetaError, ArithmeticError):
    """Adaptive procedure ran out of budget; ``best`` holds the last estimate."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class GridCoverageError(MellinZetaError, LookupError):
    """A cumulative grid does not reach the requested abscissa."""


class NoSignChangeError(MellinZetaError, ArithmeticError):
    """No sign change of E(t) found in the searched interval."""


class IllConditionedError(MellinZetaError, ArithmeticError):
    """Least-squares design matrix too ill-conditioned to trust."""
