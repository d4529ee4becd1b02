from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union, final

import numpy as np

from ..errors import ParameterError, SingularityError
from ..models import ModelTag
from ..sequences.base import CoeffSequence

SINGULAR_TOL = 1e-12


def check_regular(eta: Union[float, np.ndarray], tol: float = SINGULAR_TOL) -> None:
    """Raises SingularityError when some eta lies within `tol` of 2πℤ."""
    for value in np.atleast_1d(eta):
        if abs(math.remainder(float(value), 2 * math.pi)) < tol:
            raise SingularityError(float(value))


@final
@dataclass(frozen=True)
class VerblunskyCoeffs:
    """Verblunsky coefficients alpha_n, n >= 0, inside the open unit disk."""

    seq: CoeffSequence

    @property
    def model(self) -> ModelTag:
        return ModelTag.OPUC

    def values(self, steps: int) -> np.ndarray:
        alphas = self.seq.window(0, steps)
        outside = np.flatnonzero(np.abs(alphas) >= 1)
        if outside.size:
            n = int(outside[0])
            raise ParameterError(
                f"Verblunsky coefficient alpha_{n}={alphas[n]!r} is outside the disk"
            )
        return alphas

    def linear_form(self, steps: int) -> Tuple[np.ndarray, np.ndarray]:
        return self.values(steps), np.zeros(steps, dtype=np.complex128)

    def weights(self, eta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        eta = np.asarray(eta, dtype=np.float64)
        ones = np.ones(eta.shape, dtype=np.complex128)
        return ones, np.zeros_like(ones)


@final
@dataclass(frozen=True)
class JacobiCoeffs:
    """Jacobi parameters a_n > 0 and real b_n for n >= 1.

    The convention a_0 = 1 makes the Pruefer radius start at r_0 = 1.
    """

    a: CoeffSequence
    b: CoeffSequence

    @property
    def model(self) -> ModelTag:
        return ModelTag.OPRL

    @classmethod
    def from_perturbations(
        cls, a_minus_one: CoeffSequence, b: CoeffSequence
    ) -> JacobiCoeffs:
        return cls(CoeffSequence.constant(1.0) + a_minus_one.real(), b.real())

    @classmethod
    def schroedinger(cls, potential: CoeffSequence) -> JacobiCoeffs:
        """a_n = 1 and b_n = V_n."""
        return cls(CoeffSequence.constant(1.0), potential.real())

    def a_values(self, start: int, stop: int) -> np.ndarray:
        """a_n for start <= n < stop, with a_0 = 1."""
        values = np.ones(stop - start, dtype=np.float64)
        lo = max(start, 1)
        if stop > lo:
            values[lo - start :] = np.real(self.a.window(lo, stop))
        bad = np.flatnonzero(values <= 0)
        if bad.size:
            n = start + int(bad[0])
            raise ParameterError(f"Jacobi parameter a_{n}={values[bad[0]]!r} <= 0")
        return values

    def b_values(self, start: int, stop: int) -> np.ndarray:
        return np.real(self.b.window(start, stop))

    def linear_form(self, steps: int) -> Tuple[np.ndarray, np.ndarray]:
        """(a_n^2 - 1, b_{n+1}) for n = 0 .. steps - 1."""
        a = self.a_values(0, steps)
        b_next = self.b_values(1, steps + 1)
        return (a ** 2 - 1).astype(np.complex128), b_next.astype(np.complex128)

    def weights(self, eta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(1 / (e^{i eta} - 1), e^{i eta / 2} / (e^{i eta} - 1))."""
        eta = np.asarray(eta, dtype=np.float64)
        check_regular(eta)
        denominator = np.exp(1j * eta) - 1
        return 1 / denominator, np.exp(0.5j * eta) / denominator


def free_verblunsky() -> VerblunskyCoeffs:
    return VerblunskyCoeffs(CoeffSequence.zero())


def free_jacobi() -> JacobiCoeffs:
    return JacobiCoeffs(CoeffSequence.constant(1.0), CoeffSequence.zero())


def alpha_eta(a_n: float, b_next: float, eta: float) -> complex:
    """(a_n^2 - 1 + e^{i eta/2} b_{n+1}) / (e^{i eta} - 1)."""
    check_regular(eta)
    numerator = a_n ** 2 - 1 + np.exp(0.5j * eta) * b_next
    return complex(numerator / (np.exp(1j * eta) - 1))
