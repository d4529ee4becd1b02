"""Direct polynomial recursions, used as an oracle for the Pruefer recursion.

Values are renormalised every step by their largest modulus and the accumulated
log factor is carried separately, so evaluation near |x| = 2 does not overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union, final

import numpy as np

from ..errors import RangeError
from .coefficients import JacobiCoeffs, VerblunskyCoeffs

DIRECT_GUARD = 1000


@final
@dataclass(frozen=True, eq=False)
class ScaledPair:
    """Two polynomial values sharing the scale factor exp(log_scale).

    For OPUC the pair is (phi_n, phi_n*) at z = e^{i eta}; for OPRL it is
    (p_n, p_{n-1}) at x = 2 cos(eta / 2).
    """

    n: int
    eta: np.ndarray
    log_scale: np.ndarray
    current: np.ndarray
    previous: np.ndarray


def _renormalise(
    log_scale: np.ndarray, first: np.ndarray, second: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    size = np.maximum(np.abs(first), np.abs(second))
    size = np.where(size > 0, size, 1.0)
    return log_scale + np.log(size), first / size, second / size


def szego_polynomials(coeffs: VerblunskyCoeffs, eta: np.ndarray, n: int) -> ScaledPair:
    """Orthonormal phi_n and phi_n* at z = e^{i eta} via the Szegő recursion."""
    eta = np.atleast_1d(np.asarray(eta, dtype=np.float64))
    z = np.exp(1j * eta)
    alphas = coeffs.values(n)
    log_scale = np.zeros(eta.shape)
    phi = np.ones(eta.shape, dtype=np.complex128)
    phi_star = np.ones(eta.shape, dtype=np.complex128)
    for alpha in alphas:
        rho = math.sqrt(1 - abs(alpha) ** 2)
        phi, phi_star = (
            (z * phi - np.conj(alpha) * phi_star) / rho,
            (phi_star - alpha * z * phi) / rho,
        )
        log_scale, phi, phi_star = _renormalise(log_scale, phi, phi_star)
    return ScaledPair(n, eta, log_scale, phi, phi_star)


def jacobi_polynomials(coeffs: JacobiCoeffs, eta: np.ndarray, n: int) -> ScaledPair:
    """Orthonormal p_n and p_{n-1} at x = 2 cos(eta / 2), with p_{-1} = 0, p_0 = 1."""
    eta = np.atleast_1d(np.asarray(eta, dtype=np.float64))
    x = 2 * np.cos(eta / 2)
    a = coeffs.a_values(0, n + 1)
    b = coeffs.b_values(1, n + 1)
    log_scale = np.zeros(eta.shape)
    current = np.ones(eta.shape, dtype=np.complex128)
    previous = np.zeros(eta.shape, dtype=np.complex128)
    for k in range(n):
        following = ((x - b[k]) * current - a[k] * previous) / a[k + 1]
        log_scale, current, previous = _renormalise(log_scale, following, current)
    return ScaledPair(n, eta, log_scale, current, previous)


def polynomial_prufer(
    coeffs: Union[VerblunskyCoeffs, JacobiCoeffs], eta: np.ndarray, n: int
) -> Tuple[np.ndarray, np.ndarray]:
    """(log r_n, theta_n mod 2π) from renormalised direct polynomials, unguarded."""
    if isinstance(coeffs, VerblunskyCoeffs):
        pair = szego_polynomials(coeffs, eta, n)
        # phi_n(e^{i eta}) = r_n e^{i(n eta + theta_n)}
        w = pair.current
        theta = np.angle(w) - n * pair.eta
    else:
        pair = jacobi_polynomials(coeffs, eta, n)
        # a_n p_n - p_{n-1} e^{-i eta/2} = r_n e^{i(n eta/2 + theta_n)}
        a_n = coeffs.a_values(n, n + 1)[0]
        w = a_n * pair.current - pair.previous * np.exp(-0.5j * pair.eta)
        theta = np.angle(w) - n * pair.eta / 2
    log_r = pair.log_scale + np.log(np.abs(w))
    return log_r, np.mod(theta, 2 * np.pi)


def direct_polynomial_prufer(
    coeffs: Union[VerblunskyCoeffs, JacobiCoeffs],
    eta: float,
    n: int,
    guard: int = DIRECT_GUARD,
) -> Tuple[float, float]:
    if n > guard:
        raise RangeError(
            f"Direct polynomials are guarded at n <= {guard}, got n={n}; "
            "use prufer_trajectory for longer runs"
        )
    log_r, theta = polynomial_prufer(coeffs, np.array([eta]), n)
    return float(log_r[0]), float(theta[0])


def jacobi_quadratic_form(
    coeffs: JacobiCoeffs, eta: np.ndarray, n: int
) -> Tuple[np.ndarray, np.ndarray]:
    """log(a_n^2 p_n^2 + p_{n-1}^2) and log r_n^2 from the direct polynomials."""
    pair = jacobi_polynomials(coeffs, eta, n)
    a_n = coeffs.a_values(n, n + 1)[0]
    p, q = pair.current.real, pair.previous.real
    x = 2 * np.cos(pair.eta / 2)
    form = a_n ** 2 * p ** 2 + q ** 2
    r_squared = a_n ** 2 * p ** 2 - a_n * x * p * q + q ** 2
    return 2 * pair.log_scale + np.log(form), 2 * pair.log_scale + np.log(r_squared)
