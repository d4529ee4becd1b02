"""Functions of (eta; x_1..x_I; y_1..y_J), symmetric in the x's and in the y's."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator, Sequence, Tuple, final

from ..errors import ParameterError
from .binomial import binomial

Args = Tuple[float, ...]
Evaluator = Callable[[float, Args, Args], complex]


def splits(values: Args, size: int) -> Iterator[Tuple[Args, Args]]:
    """Yields (chosen, rest) for every `size`-subset of the positions in values."""
    for chosen in combinations(range(len(values)), size):
        picked = set(chosen)
        yield (
            tuple(values[i] for i in chosen),
            tuple(v for i, v in enumerate(values) if i not in picked),
        )


@final
@dataclass(frozen=True, eq=False)
class SymFn:
    arity: Tuple[int, int]
    func: Evaluator

    def __call__(
        self, eta: float, xs: Sequence[float] = (), ys: Sequence[float] = ()
    ) -> complex:
        xs, ys = tuple(xs), tuple(ys)
        if (len(xs), len(ys)) != self.arity:
            raise ParameterError(
                f"Expected {self.arity} arguments, got ({len(xs)}, {len(ys)})"
            )
        return complex(self.func(eta, xs, ys))

    def __matmul__(self, other: SymFn) -> SymFn:
        return sym_product(self, other)

    def scale(self, factor: complex) -> SymFn:
        return SymFn(self.arity, Scaled(self.func, factor))


@dataclass(frozen=True)
class Constant:
    value: complex

    def __call__(self, eta: float, xs: Args, ys: Args) -> complex:
        return self.value


@dataclass(frozen=True)
class Scaled:
    func: Evaluator
    factor: complex

    def __call__(self, eta: float, xs: Args, ys: Args) -> complex:
        return self.factor * self.func(eta, xs, ys)


@dataclass(frozen=True, eq=False)
class SymmetricProduct:
    """Averages first(x_S; y_T) second(x_rest; y_rest) over all argument splits.

    Each split stands for I! K! J! L! of the permutations in the full
    symmetrisation, so the weighted split sum equals the permutation average.
    """

    first: SymFn
    second: SymFn

    def __call__(self, eta: float, xs: Args, ys: Args) -> complex:
        size_x, size_y = self.first.arity
        total = 0j
        for x_first, x_second in splits(xs, size_x):
            for y_first, y_second in splits(ys, size_y):
                total += self.first.func(eta, x_first, y_first) * self.second.func(
                    eta, x_second, y_second
                )
        return total / (binomial(len(xs), size_x) * binomial(len(ys), size_y))


def constant(value: complex, arity: Tuple[int, int] = (0, 0)) -> SymFn:
    return SymFn(arity, Constant(complex(value)))


def sym_product(p: SymFn, q: SymFn) -> SymFn:
    (i, j), (k, l) = p.arity, q.arity
    return SymFn((i + k, j + l), SymmetricProduct(p, q))
