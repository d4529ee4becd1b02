"""chi, the Taylor polynomials P_{k,l} of powers of the phase ratio, and the
truncated expansion of the logarithm of the radius ratio."""
from __future__ import annotations

import cmath
import math
from typing import Any, Sequence, Tuple

import mpmath
import numpy as np

from ..errors import SingularityError
from .binomial import binomial
from .coefficients import source_xi

SINGULAR_TOL = 1e-12
REMAINDER_DPS = 50


def chi(eta: float) -> complex:
    """1 / (e^{-i eta} - 1) = -1/2 + (i/2) cot(eta / 2)."""
    if abs(math.remainder(eta, 2 * math.pi)) < SINGULAR_TOL:
        raise SingularityError(eta)
    return complex(-0.5, 0.5 / math.tan(eta / 2))


def brackets(alpha: complex, omega: float, c: int) -> Tuple[complex, complex]:
    """(alpha e^{i omega} + c conj(alpha), conj(alpha) e^{-i omega} + c alpha)."""
    rotation = cmath.exp(1j * omega)
    conj = alpha.conjugate()
    return alpha * rotation + c * conj, conj / rotation + c * alpha


def polynomial_P(k: int, l: int, first: Any, second: Any) -> Any:
    """sum over 0 < u + v < l of (-1)^v C(k+u-1, u) C(k, v) first^u second^v.

    Negative k exchanges the two brackets, since the ratio's inverse swaps them.
    Works on any numeric type closed under + and *, mpmath included.
    """
    if k < 0:
        k, first, second = -k, second, first
    total = 0 * first
    for u in range(l):
        for v in range(l - u):
            if u + v == 0:
                continue
            weight = binomial(k + u - 1, u) * binomial(k, v)
            if weight:
                total += (-1) ** v * weight * first ** u * second ** v
    return total


def eval_P(k: int, l: int, alpha: complex, omega: float, c: int) -> complex:
    first, second = brackets(complex(alpha), omega, c)
    return complex(polynomial_P(k, l, first, second))


def ratio_power(k: int, first: Any, second: Any) -> Any:
    """((1 - second) / (1 - first))^k, the k-th power of the phase ratio."""
    return ((1 - second) / (1 - first)) ** k


def taylor_remainder(
    k: int, l: int, alpha: complex, omega: float, c: int, dps: int = REMAINDER_DPS
) -> float:
    """|ratio^k - 1 - P_{k,l}| evaluated with `dps` significant digits."""
    with mpmath.workdps(dps):
        alpha_mp = mpmath.mpc(alpha.real, alpha.imag)
        rotation = mpmath.expj(omega)
        conj = mpmath.conj(alpha_mp)
        first = alpha_mp * rotation + c * conj
        second = conj / rotation + c * alpha_mp
        power = ratio_power(k, first, second)
        return float(abs(power - 1 - polynomial_P(k, l, first, second)))


def remainder_slope(
    k: int,
    l: int,
    omega: float,
    c: int,
    direction: float = 0.3,
    moduli: Sequence[float] = tuple(np.logspace(-4, -2, 9)),
) -> float:
    """Log-log slope of the Taylor remainder against |alpha| along one ray."""
    remainders = [
        taylor_remainder(k, l, modulus * cmath.exp(1j * direction), omega, c)
        for modulus in moduli
    ]
    if min(remainders) == 0:
        return math.inf
    slope, _ = np.polyfit(np.log(moduli), np.log(remainders), 1)
    return float(slope)


def log_ratio_series(alpha: complex, omega: float, c: int, order: int) -> float:
    """Re sum of source_xi alpha^I conj(alpha)^J e^{iK omega} c^L over I + J < order."""
    conj = complex(alpha).conjugate()
    total = 0j
    for I in range(order):
        for J in range(order - I):
            for K in range(I + 1):
                for L in range(J + 1):
                    weight = source_xi(I, J, K, L, c)
                    if weight:
                        total += (
                            float(weight)
                            * alpha ** I
                            * conj ** J
                            * cmath.exp(1j * K * omega)
                            * c ** L
                        )
    return total.real


def exact_log_ratio(alpha: complex, omega: float, c: int) -> float:
    """-log(r_{n+1}/r_n) from the modulus form of the step."""
    conj = complex(alpha).conjugate()
    modulus = abs(1 - alpha * cmath.exp(1j * omega) - c * conj)
    radicand = abs(1 - c * alpha) ** 2 - abs(alpha) ** 2
    return -math.log(modulus) + 0.5 * math.log(radicand)
