"""Exception hierarchy shared by all gbvlab modules.

Verification routines never raise on a failed check; they return reports. The
exceptions below signal invalid input or a computation that cannot proceed.
"""
from __future__ import annotations

from typing import Optional


class GBVError(Exception):
    """Base class for every error raised by gbvlab."""


class DomainError(GBVError, ValueError):
    """An index lies outside the domain of a sequence or window."""

    def __init__(self, index: int, message: str) -> None:
        super().__init__(message)
        self.index = index


class ParameterError(GBVError, ValueError):
    """A parameter violates the documented preconditions."""


class SchemaError(GBVError, ValueError):
    """An experiment configuration does not match the expected schema."""


class RangeError(GBVError, ValueError):
    """A request falls outside a guarded evaluation regime."""


class CoprimalityError(GBVError, ArithmeticError):
    """Two shift polynomials share a root (within tolerance)."""

    def __init__(self, root: Optional[complex], message: str) -> None:
        super().__init__(message)
        self.root = root


class SingularityError(GBVError, ArithmeticError):
    """A phase argument lands on a pole of the evaluated function."""

    def __init__(self, phase: float, message: Optional[str] = None) -> None:
        super().__init__(message or f"Singular phase argument {phase!r} (in 2πℤ)")
        self.phase = phase


class StepDomainError(GBVError, ArithmeticError):
    """The Pruefer step radicand is not positive."""

    def __init__(self, n: int, alpha: complex, message: Optional[str] = None) -> None:
        super().__init__(
            message or f"Step {n}: radicand is not positive for alpha={alpha!r}"
        )
        self.n = n
        self.alpha = alpha


class DegenerateStepError(StepDomainError):
    """The Pruefer step numerator vanishes, leaving the phase undefined."""

    def __init__(self, n: int, alpha: complex) -> None:
        super().__init__(n, alpha, f"Step {n}: zero numerator for alpha={alpha!r}")


class ResolutionError(GBVError, ArithmeticError):
    """Quadrature did not reach the requested accuracy on the available grid."""

    def __init__(self, estimate: float, message: str) -> None:
        super().__init__(message)
        self.estimate = estimate
