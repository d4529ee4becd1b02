"""Polynomials in the index-shift operator T, (Tz)_n = z_{n+1}."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, final

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import linalg

from ..errors import CoprimalityError
from ..typing import IndexEvaluator
from .base import CoeffSequence

logger = logging.getLogger(__name__)

COPRIME_TOL = 1e-9


@final
@dataclass(frozen=True)
class ShiftPolynomial:
    """P(T) = sum_k c_k T^k, stored lowest degree first with trailing zeros trimmed."""

    coefficients: Tuple[complex, ...]

    def __post_init__(self) -> None:
        coefficients = tuple(complex(c) for c in self.coefficients) or (0j,)
        while len(coefficients) > 1 and coefficients[-1] == 0:
            coefficients = coefficients[:-1]
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def of(cls, *coefficients: complex) -> ShiftPolynomial:
        return cls(tuple(coefficients))

    @classmethod
    def rotation(cls, phase: float) -> ShiftPolynomial:
        """The annihilator e^{i phase} T - 1 of exact rotations with that phase."""
        return cls((-1, np.exp(1j * phase)))

    @classmethod
    def product(cls, factors: Iterable[ShiftPolynomial]) -> ShiftPolynomial:
        result = cls.of(1)
        for factor in factors:
            result = result * factor
        return result

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=np.complex128)

    def roots(self) -> np.ndarray:
        if self.degree == 0:
            return np.empty(0, dtype=np.complex128)
        return npoly.polyroots(self.array)

    def __call__(self, t: complex) -> complex:
        return complex(npoly.polyval(t, self.array))

    def __add__(self, other: ShiftPolynomial) -> ShiftPolynomial:
        return ShiftPolynomial(tuple(npoly.polyadd(self.array, other.array)))

    def __sub__(self, other: ShiftPolynomial) -> ShiftPolynomial:
        return ShiftPolynomial(tuple(npoly.polysub(self.array, other.array)))

    def __mul__(self, other: ShiftPolynomial) -> ShiftPolynomial:
        return ShiftPolynomial(tuple(npoly.polymul(self.array, other.array)))

    def max_residual(self, target: ShiftPolynomial) -> float:
        return float(np.abs((self - target).array).max())


@dataclass(frozen=True)
class Shifted:
    coefficients: Tuple[complex, ...]
    func: IndexEvaluator

    def __call__(self, n: np.ndarray) -> np.ndarray:
        total = np.zeros(n.shape, dtype=np.complex128)
        for k, c in enumerate(self.coefficients):
            if c != 0:
                total = total + c * self.func(n + k)
        return total


def apply_shift_poly(poly: ShiftPolynomial, z: CoeffSequence) -> CoeffSequence:
    """Returns P(T)z, i.e. n -> sum_k c_k z_{n+k}."""
    bound = None
    if z.bound is not None:
        bound = float(np.abs(poly.array).sum()) * z.bound
    return CoeffSequence(Shifted(poly.coefficients, z.func), z.start_index, bound)


def common_root(
    first: ShiftPolynomial, second: ShiftPolynomial, tol: float = COPRIME_TOL
) -> Optional[complex]:
    """Returns a root shared by both polynomials within `tol`, if there is one."""
    other_roots = second.roots()
    for root in first.roots():
        if other_roots.size and np.abs(other_roots - root).min() <= tol:
            return complex(root)
    return None


def bezout_coprime(
    q: ShiftPolynomial, r: ShiftPolynomial, tol: float = COPRIME_TOL
) -> Tuple[ShiftPolynomial, ShiftPolynomial]:
    """Solves U Q + V R = 1 with deg U < deg R and deg V < deg Q.

    The coefficients come from the Sylvester system of the two polynomials.
    Raises CoprimalityError when the polynomials share a root within `tol`.
    """
    root = common_root(q, r, tol)
    if root is not None:
        raise CoprimalityError(root, f"Shift polynomials share the root {root!r}")
    if q.degree == 0:
        return ShiftPolynomial.of(1 / q.coefficients[0]), ShiftPolynomial.of(0)
    if r.degree == 0:
        return ShiftPolynomial.of(0), ShiftPolynomial.of(1 / r.coefficients[0])
    m, n = r.degree, q.degree
    sylvester = np.zeros((m + n, m + n), dtype=np.complex128)
    for column in range(m):
        sylvester[column : column + n + 1, column] = q.array
    for column in range(n):
        sylvester[column : column + m + 1, m + column] = r.array
    rhs = np.zeros(m + n, dtype=np.complex128)
    rhs[0] = 1
    solution = linalg.solve(sylvester, rhs)
    u, v = ShiftPolynomial(tuple(solution[:m])), ShiftPolynomial(tuple(solution[m:]))
    residual = (u * q + v * r).max_residual(ShiftPolynomial.of(1))
    if residual > tol:
        raise CoprimalityError(
            None, f"Bezout residual {residual:.3e} exceeds tolerance {tol:.1e}"
        )
    logger.debug("Bezout pair of degrees (%d, %d), residual %.3e", m, n, residual)
    return u, v


def annihilator(phases: Sequence[float]) -> ShiftPolynomial:
    """Product of the rotation annihilators for the given phases."""
    return ShiftPolynomial.product(ShiftPolynomial.rotation(phi) for phi in phases)
