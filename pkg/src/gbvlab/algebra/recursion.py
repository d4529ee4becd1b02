"""Memoised evaluation of the f, g, h, G and H function families.

    f_{I,J,K,L} = source_{I,J,K,L}
                  + sum omega_{K,a,b,g,d} (.) g_{I-a-d, J-b-g, K+g-a, L-b-d}
    g_{I,J,K,L} = chi(K eta - sum x + sum y) f_{I,J,K,L}

The sum runs over a, b, g, d >= 0 with a + b + g + d >= 1, so every call on
the right has a strictly smaller I + J. All families vanish unless
I, J, K, L >= 0.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple, final

import numpy as np

from ..errors import ParameterError, SingularityError
from .binomial import binomial
from .coefficients import coeff_omega, source_xi
from .symfn import Args, SymFn, splits
from .taylor import chi

logger = logging.getLogger(__name__)

MAX_ORDER = 6
KEY_DIGITS = 12

Key = Tuple[str, int, int, int, int, float, Args, Args]


def index_shifts(I: int, J: int, L: int) -> Iterator[Tuple[int, int, int, int]]:
    """(a, b, g, d) with a + b + g + d >= 1 keeping the shifted I, J, L >= 0."""
    for a in range(I + 1):
        for d in range(min(I - a, L) + 1):
            for b in range(min(J, L - d) + 1):
                for g in range(J - b + 1):
                    if a + b + g + d:
                        yield a, b, g, d


@final
@dataclass(frozen=True)
class CacheStats:
    hits: int
    misses: int
    size: int


class ExpansionEvaluator:
    """Evaluates the recursion families for one model constant c.

    Values are cached on the indices and the argument tuple rounded to
    `digits` decimals (sorted within x's and within y's, the families being
    symmetric in each group).
    """

    def __init__(
        self, c: int = 0, max_order: int = MAX_ORDER, digits: int = KEY_DIGITS
    ):
        if c not in (0, 1):
            raise ParameterError(f"Model constant c must be 0 or 1, got {c}")
        self.c = c
        self.max_order = max_order
        self.digits = digits
        self._cache: Dict[Key, complex] = {}
        self.hits = 0
        self.misses = 0

    @property
    def stats(self) -> CacheStats:
        return CacheStats(self.hits, self.misses, len(self._cache))

    def clear(self) -> None:
        self._cache.clear()

    def _key(
        self,
        family: str,
        indices: Tuple[int, int, int, int],
        eta: float,
        xs: Args,
        ys: Args,
    ) -> Key:
        return (
            family,
            *indices,
            round(eta, self.digits),
            tuple(sorted(round(x, self.digits) for x in xs)),
            tuple(sorted(round(y, self.digits) for y in ys)),
        )

    def _check(self, I: int, J: int, xs: Args, ys: Args) -> None:
        if (len(xs), len(ys)) != (I, J):
            raise ParameterError(
                f"Expected ({I}, {J}) arguments, got ({len(xs)}, {len(ys)})"
            )
        if I + J > self.max_order:
            raise ParameterError(f"Order I+J={I + J} exceeds {self.max_order}")

    def f(
        self,
        I: int,
        J: int,
        K: int,
        L: int,
        eta: float,
        xs: Sequence[float] = (),
        ys: Sequence[float] = (),
    ) -> complex:
        if min(I, J, K, L) < 0:
            return 0j
        xs, ys = tuple(xs), tuple(ys)
        self._check(I, J, xs, ys)
        key = self._key("f", (I, J, K, L), eta, xs, ys)
        if key in self._cache:
            self.hits += 1
            return self._cache[key]
        self.misses += 1
        value = complex(source_xi(I, J, K, L, self.c))
        for a, b, g, d in index_shifts(I, J, L):
            weight = coeff_omega(K, a, b, g, d)
            if weight:
                shifted = (I - a - d, J - b - g, K + g - a, L - b - d)
                value += weight * self.mean("g", shifted, eta, xs, ys)
        self._cache[key] = value
        return value

    def mean(
        self,
        family: str,
        indices: Tuple[int, int, int, int],
        eta: float,
        xs: Args,
        ys: Args,
    ) -> complex:
        """A family member at smaller arity, symmetric-multiplied by the constant 1.

        Averages the member over every choice of its arguments among xs and ys.
        """
        I, J, K, L = indices
        if min(indices) < 0:
            return 0j
        if I > len(xs) or J > len(ys):
            raise ParameterError(f"Arity ({I}, {J}) exceeds the supplied arguments")
        method = getattr(self, family)
        total = 0j
        for x_part, _ in splits(xs, I):
            for y_part, _ in splits(ys, J):
                total += method(I, J, K, L, eta, x_part, y_part)
        return total / (binomial(len(xs), I) * binomial(len(ys), J))

    def g(
        self,
        I: int,
        J: int,
        K: int,
        L: int,
        eta: float,
        xs: Sequence[float] = (),
        ys: Sequence[float] = (),
    ) -> complex:
        value = self.f(I, J, K, L, eta, xs, ys)
        if value == 0:
            return 0j
        phase = K * eta - sum(xs) + sum(ys)
        try:
            return chi(phase) * value
        except SingularityError:
            raise SingularityError(
                phase,
                f"g_{I},{J},{K},{L} is singular at eta={eta!r} "
                f"with x={tuple(xs)!r}, y={tuple(ys)!r}",
            ) from None

    def h(
        self,
        I: int,
        J: int,
        K: int,
        L: int,
        eta: float,
        xs: Sequence[float] = (),
        ys: Sequence[float] = (),
    ) -> complex:
        return self.f(I, J, K, L, eta, xs, ys) + self.g(I, J, K, L, eta, xs, ys)

    def G(
        self,
        I: int,
        J: int,
        K: int,
        L: int,
        eta: float,
        xs: Sequence[float] = (),
        ys: Sequence[float] = (),
    ) -> complex:
        if K <= 0:
            return 0j
        return K * self.g(I, J, K, L, eta, xs, ys)

    def H(
        self,
        I: int,
        J: int,
        K: int,
        L: int,
        eta: float,
        xs: Sequence[float] = (),
        ys: Sequence[float] = (),
    ) -> complex:
        if K <= 0:
            return 0j
        return K * self.h(I, J, K, L, eta, xs, ys)

    def symfn(self, family: str, I: int, J: int, K: int, L: int) -> SymFn:
        """The family member as a SymFn of arity (I, J), for use with (.)."""
        if family not in ("f", "g", "h", "G", "H"):
            raise ParameterError(f"Unknown function family {family!r}")
        return SymFn((max(I, 0), max(J, 0)), FamilyMember(self, family, I, J, K, L))


@dataclass(frozen=True, eq=False)
class FamilyMember:
    evaluator: ExpansionEvaluator
    family: str
    I: int
    J: int
    K: int
    L: int

    def __call__(self, eta: float, xs: Args, ys: Args) -> complex:
        if min(self.I, self.J) < 0:
            return 0j
        method = getattr(self.evaluator, self.family)
        return method(self.I, self.J, self.K, self.L, eta, xs, ys)


@final
@dataclass(frozen=True)
class RemovabilityReport:
    center: float
    radii: Tuple[float, ...]
    moduli: Tuple[float, ...]
    growth_limit: float

    @property
    def max_modulus(self) -> float:
        return max(self.moduli)

    @property
    def bounded(self) -> bool:
        """Whether shrinking the puncture leaves the modulus within the limit."""
        outer = max(self.moduli[0], 1e-300)
        return self.max_modulus <= self.growth_limit * outer


def removable_singularity_probe(
    evaluator: ExpansionEvaluator,
    indices: Tuple[int, int, int, int],
    xs: Sequence[float],
    ys: Sequence[float],
    center: float,
    radii: Sequence[float] = tuple(np.logspace(-2, -7, 11)),
    growth_limit: float = 10.0,
) -> RemovabilityReport:
    """Evaluates g on both sides of `center` at shrinking distances.

    A pole shows up as moduli growing like 1/radius; a removable singularity
    keeps them bounded.
    """
    moduli: List[float] = []
    for radius in radii:
        evaluator.clear()
        moduli.append(
            max(
                abs(evaluator.g(*indices, center + side * radius, xs, ys))
                for side in (1, -1)
            )
        )
    logger.debug(
        "Probed g%r around %r: moduli from %.3e to %.3e",
        indices,
        center,
        moduli[0],
        moduli[-1],
    )
    return RemovabilityReport(center, tuple(radii), tuple(moduli), growth_limit)
