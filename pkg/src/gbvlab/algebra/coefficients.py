"""Exact coefficient families of the logarithm expansion and its recursion.

For K > 0 the values are read off from -log|1 - alpha e^{i omega} - c conj(alpha)|;
K = 0 values come from expanding half the logarithm of the step radicand,
1 - c (alpha + conj(alpha)) - (1 - c^2) alpha conj(alpha).
"""
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

import sympy

from .binomial import binomial, kronecker

# Keys are (I, J, L, l): the power of (1 - c^2) is l.
RadicandTable = Dict[Tuple[int, int, int, int], Fraction]


@lru_cache(maxsize=None)
def _radicand_table(degree: int) -> RadicandTable:
    """Coefficients of 1/2 sum_m (c (a + b) + s a b)^m / m up to total degree.

    a, b stand for alpha and its conjugate; s stands for 1 - c^2.
    """
    a, b, c, s = sympy.symbols("a b c s")
    series = sum(
        sympy.Rational(1, 2 * m) * (c * (a + b) + s * a * b) ** m
        for m in range(1, degree + 1)
    )
    table: RadicandTable = {}
    for (i, j, l_c, l_s), value in sympy.Poly(series, a, b, c, s).terms():
        if i + j <= degree:
            rational = sympy.Rational(value)
            table[i, j, l_c, l_s] = Fraction(int(rational.p), int(rational.q))
    return table


def coeff_xi(I: int, J: int, K: int, L: int, c: int = 0) -> Fraction:
    """The expansion coefficient xi_{I,J,K,L} at the model constant c."""
    if min(I, J, K, L) < 0:
        return Fraction(0)
    if K > 0:
        return kronecker(I - K) * kronecker(J - L) * Fraction(binomial(K + L, K), K + L)
    if I + J == 0:
        return Fraction(0)
    table = _radicand_table(I + J)
    scale = 1 - c * c
    return sum(
        (
            value * scale ** power
            for (i, j, l_c, power), value in table.items()
            if (i, j, l_c) == (I, J, L)
        ),
        Fraction(0),
    )


def source_xi(I: int, J: int, K: int, L: int, c: int = 0) -> Fraction:
    """The coefficient of alpha^I conj(alpha)^J e^{iK omega} c^L in -log(r_{n+1}/r_n).

    For K > 0 this is xi itself; for K = 0 the (c conj(alpha))^L / L terms of
    the modulus logarithm enter next to the radicand coefficients.
    """
    if K != 0:
        return coeff_xi(I, J, K, L, c)
    modulus = Fraction(1, L) if I == 0 and J == L >= 1 else Fraction(0)
    return modulus - coeff_xi(I, J, 0, L, c)


def coeff_Xi(I: int, J: int, K: int, L: int) -> int:
    return kronecker(I - K) * kronecker(J - L) * binomial(K + L - 1, K - 1)


def coeff_omega(K: int, a: int, b: int, g: int, d: int) -> int:
    """omega_{K,a,b,g,d}, taken literally (not cut off at K >= 1)."""
    sign = -1 if (g + d) % 2 else 1
    return (
        sign
        * binomial(K + g + b - 1, a + b)
        * binomial(K + g - a, g + d)
        * binomial(a + b, a)
        * binomial(g + d, g)
    )


def coeff_Omega(K: int, a: int, b: int, g: int, d: int) -> int:
    sign = -1 if (g + d) % 2 else 1
    return (
        sign
        * binomial(K + g + b - 1, K - 1)
        * binomial(K, a + d)
        * binomial(a + d, a)
        * binomial(b + g, b)
    )
