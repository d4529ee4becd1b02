from __future__ import annotations

import cmath
import math
from itertools import permutations
from typing import Sequence, Tuple

from gbvlab.algebra import SymFn


def naive_sym_product(
    p: SymFn, q: SymFn, eta: float, xs: Sequence[float], ys: Sequence[float]
) -> complex:
    """Averages p(x_S; y_T) q(x_rest; y_rest) over all argument permutations."""
    i, j = p.arity
    total, count = 0j, 0
    for x_order in permutations(xs):
        for y_order in permutations(ys):
            total += p(eta, x_order[:i], y_order[:j]) * q(
                eta, x_order[i:], y_order[j:]
            )
            count += 1
    return total / count


class PhaseSum:
    """A symmetric test function: weight e^{i(k eta - sum x + sum y)} prod(1 + y)."""

    def __init__(self, k: int, weight: complex = 1.0):
        self.k = k
        self.weight = weight

    def __call__(self, eta: float, xs: Tuple[float, ...], ys: Tuple[float, ...]):
        phase = self.k * eta - sum(xs) + sum(ys)
        return self.weight * cmath.exp(1j * phase) * math.prod(1 + y for y in ys)
