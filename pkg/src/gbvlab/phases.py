"""Finite phase sets modulo 2π and the exceptional sets built from them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Any, Dict, Iterable, Iterator, List, Tuple, Union, final

from .errors import ParameterError
from .models import ModelTag

TWO_PI = 2 * math.pi
DEDUP_TOL = 1e-9


def canonical(phase: float) -> float:
    """Reduces a phase to [0, 2π)."""
    reduced = math.fmod(phase, TWO_PI)
    if reduced < 0:
        reduced += TWO_PI
    return 0.0 if reduced >= TWO_PI else reduced


def circular_distance(first: float, second: float) -> float:
    difference = abs(canonical(first) - canonical(second))
    return min(difference, TWO_PI - difference)


@final
@dataclass(frozen=True, eq=False)
class PhaseSet:
    """A finite set of phases, stored canonically in [0, 2π) and sorted.

    Phases closer than `dedup_tol` (modulo 2π) merge into the first one seen.
    """

    phases: Tuple[float, ...] = ()
    dedup_tol: float = DEDUP_TOL

    def __post_init__(self) -> None:
        kept: List[float] = []
        for phase in map(canonical, self.phases):
            if all(circular_distance(phase, seen) > self.dedup_tol for seen in kept):
                kept.append(phase)
        object.__setattr__(self, "phases", tuple(sorted(kept)))

    @classmethod
    def of(cls, *phases: float, dedup_tol: float = DEDUP_TOL) -> PhaseSet:
        return cls(tuple(phases), dedup_tol)

    @classmethod
    def zero(cls) -> PhaseSet:
        return cls((0.0,))

    def __iter__(self) -> Iterator[float]:
        return iter(self.phases)

    def __len__(self) -> int:
        return len(self.phases)

    def __bool__(self) -> bool:
        return bool(self.phases)

    def __contains__(self, phase: object) -> bool:
        if not isinstance(phase, (int, float)):
            return False
        return any(circular_distance(phase, p) <= self.dedup_tol for p in self.phases)

    def __add__(self, other: PhaseSet) -> PhaseSet:
        return minkowski_sum(self, other)

    def __neg__(self) -> PhaseSet:
        return PhaseSet(tuple(-phase for phase in self.phases), self.dedup_tol)

    def __sub__(self, other: PhaseSet) -> PhaseSet:
        return minkowski_sum(self, -other)

    def __or__(self, other: PhaseSet) -> PhaseSet:
        return PhaseSet(self.phases + other.phases, self.dedup_tol)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhaseSet):
            return NotImplemented
        return self.issubset(other) and other.issubset(self)

    def __repr__(self) -> str:
        return f"PhaseSet({list(self.phases)!r})"

    def issubset(self, other: PhaseSet) -> bool:
        return all(phase in other for phase in self.phases)

    def distance(self, phase: float) -> float:
        """Circular distance from `phase` to the nearest member (inf when empty)."""
        return min((circular_distance(phase, p) for p in self.phases), default=math.inf)


def minkowski_sum(first: PhaseSet, second: PhaseSet) -> PhaseSet:
    sums = tuple(a + b for a, b in product(first.phases, second.phases))
    return PhaseSet(sums, min(first.dedup_tol, second.dedup_tol))


def k_fold_sum(phases: PhaseSet, k: int) -> PhaseSet:
    """A + ... + A (k times); the 0-fold sum is {0}."""
    if k < 0:
        raise ParameterError(f"Fold count must be non-negative, got {k}")
    result = PhaseSet((0.0,), phases.dedup_tol)
    for _ in range(k):
        result = result + phases
    return result


def critical_set_Ap(phases: PhaseSet, p: int, model: ModelTag) -> PhaseSet:
    """The critical set A_p of the given model.

    OPUC: A_1 is empty, A_2 = A and for odd p = 2q + 1 the set is the q-fold sum
    minus the (q - 1)-fold sum. OPRL: the (p - 1)-fold sum of A_2 = A | {0}.
    """
    if p < 1:
        raise ParameterError(f"p must be a positive integer, got {p}")
    if model is ModelTag.OPUC:
        if p == 1:
            return PhaseSet((), phases.dedup_tol)
        if p == 2:
            return phases
        if p % 2 == 0:
            raise ParameterError(f"OPUC critical sets need odd p, got {p}")
        q = (p - 1) // 2
        return k_fold_sum(phases, q) - k_fold_sum(phases, q - 1)
    if p == 1:
        return PhaseSet.zero()
    return k_fold_sum(phases | PhaseSet.zero(), p - 1)


class Variant(Enum):
    """Which exceptional set to build.

    OPRL_SQUARES also adds the pairwise sums A + A to the generators; OPRL_FOLDS
    takes the union of the k-fold sums of A for k < p instead.
    """

    OPUC = "opuc"
    OPRL = "oprl"
    OPRL_SQUARES = "oprl-squares"
    OPRL_FOLDS = "oprl-folds"

    @property
    def model(self) -> ModelTag:
        return ModelTag.OPUC if self is Variant.OPUC else ModelTag.OPRL

    @classmethod
    def default_for(cls, model: ModelTag) -> Variant:
        return cls.OPUC if model is ModelTag.OPUC else cls.OPRL


@dataclass(frozen=True)
class ExceptionalPoint:
    point: Union[complex, float]
    eta: float
    boundary: bool = False

    def to_json(self) -> Dict[str, Any]:
        point: Any = self.point
        if isinstance(point, complex):
            point = [point.real, point.imag]
        return {"point": point, "eta": self.eta, "boundary": self.boundary}


@final
@dataclass(frozen=True)
class ExceptionalSet:
    model: ModelTag
    points: Tuple[ExceptionalPoint, ...]
    generators: PhaseSet

    def __iter__(self) -> Iterator[ExceptionalPoint]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def etas(self) -> Tuple[float, ...]:
        return tuple(point.eta for point in self.points)

    def to_json(self) -> List[Dict[str, Any]]:
        return [point.to_json() for point in self.points]


def spectral_point(eta: float, model: ModelTag) -> Union[complex, float]:
    """e^{i eta} on the circle, 2 cos(eta / 2) on the line (eta taken in [0, 2π))."""
    if model is ModelTag.OPUC:
        return complex(math.cos(eta), math.sin(eta))
    return 2 * math.cos(canonical(eta) / 2)


def exceptional_points(
    generators: PhaseSet, model: ModelTag, boundary_tol: float = DEDUP_TOL
) -> ExceptionalSet:
    points = []
    for eta in generators:
        point = spectral_point(eta, model)
        boundary = model is ModelTag.OPRL and abs(point) >= 2 - boundary_tol
        points.append(ExceptionalPoint(point, eta, boundary))
    return ExceptionalSet(model, tuple(points), generators)


def exceptional_S(
    phases: PhaseSet, p: int, model: ModelTag, variant: Variant
) -> ExceptionalSet:
    """The finite set outside of which the spectral measure is purely a.c."""
    if variant.model is not model:
        raise ParameterError(f"Variant {variant.value} does not apply to {model.name}")
    if p < 1:
        raise ParameterError(f"p must be a positive integer, got {p}")
    if variant is Variant.OPUC:
        if p % 2 == 0:
            raise ParameterError(f"OPUC exceptional sets need odd p, got {p}")
        generators = critical_set_Ap(phases, p, model)
    elif variant is Variant.OPRL_FOLDS:
        generators = PhaseSet((), phases.dedup_tol)
        for k in range(1, p):
            generators = generators | k_fold_sum(phases, k)
    else:
        extended = phases | PhaseSet.zero()
        if variant is Variant.OPRL_SQUARES:
            extended = extended | (phases + phases)
        generators = k_fold_sum(extended, p - 1)
    return exceptional_points(generators, model)


def refine_exceptional(
    exceptional: ExceptionalSet, drop: Iterable[float]
) -> ExceptionalSet:
    """Removes the points generated by the given phases.

    Used when the products of components behind those phases are known to be
    summable, which removes them from the set of candidates.
    """
    dropped = PhaseSet(tuple(drop), exceptional.generators.dedup_tol)
    kept = tuple(point for point in exceptional.points if point.eta not in dropped)
    generators = PhaseSet(
        tuple(point.eta for point in kept), exceptional.generators.dedup_tol
    )
    return ExceptionalSet(exceptional.model, kept, generators)
