from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Number
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union, final

import numpy as np

from ..errors import DomainError
from ..typing import IndexEvaluator

Scalar = Union[int, float, complex]
TailBound = Callable[[int], float]


@final
@dataclass(frozen=True, eq=False)
class CoeffSequence:
    """A deterministic complex sequence {z_n}, n >= start_index.

    `func` maps an integer index array to the complex values at those indices and
    must be vectorised; every probe of an infinite sequence goes through a
    finite window.
    """

    func: IndexEvaluator
    start_index: int = 0
    bound: Optional[float] = None
    name: str = ""

    def __call__(self, n: int) -> complex:
        self._check(n)
        return complex(self.func(np.array([n], dtype=np.int64))[0])

    def window(self, start: int, stop: int) -> np.ndarray:
        """Returns the values for start <= n < stop."""
        self._check(start)
        if stop < start:
            raise DomainError(stop, f"Window end {stop} precedes start {start}")
        indices = np.arange(start, stop, dtype=np.int64)
        return np.asarray(self.func(indices), dtype=np.complex128)

    def _check(self, n: int) -> None:
        if n < self.start_index:
            raise DomainError(
                n, f"Index {n} is below the start index {self.start_index}"
            )

    def __add__(self, other: CoeffSequence) -> CoeffSequence:
        return CoeffSequence(
            Combined(np.add, (self.func, other.func)),
            start_index=max(self.start_index, other.start_index),
            bound=_sum_bound(self.bound, other.bound),
        )

    def __sub__(self, other: CoeffSequence) -> CoeffSequence:
        return self + other.scale(-1)

    def __neg__(self) -> CoeffSequence:
        return self.scale(-1)

    def __mul__(self, other: Union[CoeffSequence, Scalar]) -> CoeffSequence:
        if isinstance(other, Number):
            return self.scale(other)
        bound = None
        if self.bound is not None and other.bound is not None:
            bound = self.bound * other.bound
        return CoeffSequence(
            Combined(np.multiply, (self.func, other.func)),
            start_index=max(self.start_index, other.start_index),
            bound=bound,
        )

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> CoeffSequence:
        bound = None if self.bound is None else abs(factor) * self.bound
        scaled = Scaled(self.func, complex(factor))
        return CoeffSequence(scaled, self.start_index, bound)

    def conjugate(self) -> CoeffSequence:
        return CoeffSequence(Conjugated(self.func), self.start_index, self.bound)

    def real(self) -> CoeffSequence:
        return CoeffSequence(RealPart(self.func), self.start_index, self.bound)

    @classmethod
    def from_values(
        cls, values: Iterable[Scalar], start_index: int = 0
    ) -> CoeffSequence:
        table = np.asarray(list(values), dtype=np.complex128)
        bound = float(np.abs(table).max()) if table.size else 0.0
        return cls(Tabulated(table, start_index), start_index, bound, "values")

    @classmethod
    def zero(cls, start_index: int = 0) -> CoeffSequence:
        return cls.constant(0, start_index)

    @classmethod
    def constant(cls, value: Scalar, start_index: int = 0) -> CoeffSequence:
        return cls(Constant(complex(value)), start_index, abs(value), "constant")


def _sum_bound(first: Optional[float], second: Optional[float]) -> Optional[float]:
    if first is None or second is None:
        return None
    return first + second


@dataclass(frozen=True)
class Combined:
    op: Callable[[np.ndarray, np.ndarray], np.ndarray]
    funcs: Tuple[IndexEvaluator, IndexEvaluator]

    def __call__(self, n: np.ndarray) -> np.ndarray:
        first, second = self.funcs
        return self.op(first(n), second(n))


@dataclass(frozen=True)
class Scaled:
    func: IndexEvaluator
    factor: complex

    def __call__(self, n: np.ndarray) -> np.ndarray:
        return self.factor * self.func(n)


@dataclass(frozen=True)
class Conjugated:
    func: IndexEvaluator

    def __call__(self, n: np.ndarray) -> np.ndarray:
        return np.conj(self.func(n))


@dataclass(frozen=True)
class RealPart:
    func: IndexEvaluator

    def __call__(self, n: np.ndarray) -> np.ndarray:
        return np.real(self.func(n)).astype(np.complex128)


@dataclass(frozen=True)
class Constant:
    value: complex

    def __call__(self, n: np.ndarray) -> np.ndarray:
        return np.full(n.shape, self.value, dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class Tabulated:
    table: np.ndarray
    start_index: int

    def __call__(self, n: np.ndarray) -> np.ndarray:
        offsets = n - self.start_index
        if offsets.size and (offsets.min() < 0 or offsets.max() >= len(self.table)):
            bad = int(n[(offsets < 0) | (offsets >= len(self.table))][0])
            raise DomainError(bad, f"Index {bad} is outside the tabulated values")
        return self.table[offsets]


@final
@dataclass(frozen=True, eq=False)
class RotatedBVComponent:
    """A sequence together with the phase its rotated variation is taken against.

    `budget` is the declared total rotated variation from `seq.start_index` on;
    `tail`, when known, bounds the variation beyond a given index analytically.
    """

    seq: CoeffSequence
    phase: float
    budget: Optional[float] = None
    tail: Optional[TailBound] = field(default=None, repr=False)

    def conjugate(self) -> RotatedBVComponent:
        return RotatedBVComponent(
            self.seq.conjugate(), -self.phase, self.budget, self.tail
        )

    def scale(self, factor: Scalar) -> RotatedBVComponent:
        budget = None if self.budget is None else abs(factor) * self.budget
        tail = None if self.tail is None else ScaledTail(self.tail, abs(factor))
        return RotatedBVComponent(self.seq.scale(factor), self.phase, budget, tail)


@dataclass(frozen=True)
class ScaledTail:
    tail: TailBound
    factor: float

    def __call__(self, index: int) -> float:
        return self.factor * self.tail(index)


@final
@dataclass(frozen=True, eq=False)
class GBVDecomposition:
    """A finite sum of rotated-BV components, optionally with the sequence it
    represents when that sequence is known in closed form."""

    components: Tuple[RotatedBVComponent, ...] = ()
    source: Optional[CoeffSequence] = None

    @property
    def phases(self) -> Tuple[float, ...]:
        return tuple(component.phase for component in self.components)

    @property
    def composed(self) -> CoeffSequence:
        """Pointwise sum of the components."""
        if not self.components:
            return CoeffSequence.zero()
        total = self.components[0].seq
        for component in self.components[1:]:
            total = total + component.seq
        return total

    @property
    def sequence(self) -> CoeffSequence:
        return self.composed if self.source is None else self.source

    def residual(self, start: int, stop: int) -> float:
        """Largest deviation between the component sum and the represented sequence."""
        if self.source is None:
            return 0.0
        composed = self.composed.window(start, stop)
        difference = composed - self.source.window(start, stop)
        return float(np.abs(difference).max()) if difference.size else 0.0

    def __add__(self, other: GBVDecomposition) -> GBVDecomposition:
        source = None
        if self.source is not None and other.source is not None:
            source = self.source + other.source
        return GBVDecomposition(self.components + other.components, source)

    @classmethod
    def of(
        cls,
        components: Sequence[RotatedBVComponent],
        source: Optional[CoeffSequence] = None,
    ) -> GBVDecomposition:
        return cls(tuple(components), source)
