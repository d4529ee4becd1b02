"""Rotated variation sums, certificates and the GBV algebra checks."""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, combinations_with_replacement
from typing import List, Optional, Sequence, Tuple, final

import numpy as np

from ..errors import CoprimalityError, DomainError, ParameterError
from ..phases import PhaseSet, circular_distance
from .base import CoeffSequence, GBVDecomposition, RotatedBVComponent
from .shift import (
    COPRIME_TOL,
    ShiftPolynomial,
    annihilator,
    apply_shift_poly,
    bezout_coprime,
)

logger = logging.getLogger(__name__)

CERTIFY_CUTOFF = 10 ** 6
CHECK_RTOL = 1e-9


def variation_terms(comp: RotatedBVComponent, start: int, stop: int) -> np.ndarray:
    """|e^{i phase} beta_{n+1} - beta_n| for start <= n < stop."""
    if start < comp.seq.start_index:
        raise DomainError(
            start, f"Index {start} is below the start index {comp.seq.start_index}"
        )
    if stop < start:
        raise DomainError(stop, f"Window end {stop} precedes start {start}")
    values = comp.seq.window(start, stop + 1)
    return np.abs(cmath.exp(1j * comp.phase) * values[1:] - values[:-1])


def rotated_variation(comp: RotatedBVComponent, start: int, stop: int) -> float:
    """Sum of |e^{i phase} beta_{n+1} - beta_n| over start <= n < stop."""
    return math.fsum(variation_terms(comp, start, stop))


def _within(measured: float, bound: float) -> bool:
    return measured <= bound * (1 + CHECK_RTOL) + CHECK_RTOL


@final
@dataclass(frozen=True)
class VariationCertificate:
    """Measured variation up to `cutoff`, plus the analytic tail beyond it."""

    measured: float
    tail: Optional[float]
    budget: Optional[float]
    cutoff: int

    @property
    def total(self) -> float:
        return self.measured + (self.tail or 0.0)

    @property
    def passed(self) -> bool:
        if self.budget is None or self.tail is None:
            return False
        return _within(self.total, self.budget)


def certify(
    comp: RotatedBVComponent, cutoff: int = CERTIFY_CUTOFF
) -> VariationCertificate:
    """Checks the declared budget of a component against its variation.

    Components without a declared budget or a known tail bound never pass.
    """
    start = comp.seq.start_index
    measured = rotated_variation(comp, start, cutoff)
    tail = None if comp.tail is None else float(comp.tail(cutoff))
    certificate = VariationCertificate(measured, tail, comp.budget, cutoff)
    logger.debug(
        "Certified phase %r up to %d: measured %.6e, tail %r, budget %r",
        comp.phase,
        cutoff,
        measured,
        tail,
        comp.budget,
    )
    return certificate


@final
@dataclass(frozen=True)
class BoundednessReport:
    max_modulus: float
    bound: float

    @property
    def passed(self) -> bool:
        return _within(self.max_modulus, self.bound)


def boundedness_check(
    comp: RotatedBVComponent, start: int, stop: int
) -> BoundednessReport:
    """max |beta_n| over the window against |beta_start| + rotated variation."""
    values = comp.seq.window(start, stop)
    if not values.size:
        raise DomainError(stop, f"Empty window [{start}, {stop})")
    bound = abs(values[0]) + rotated_variation(comp, start, stop - 1)
    return BoundednessReport(float(np.abs(values).max()), float(bound))


@final
@dataclass(frozen=True, eq=False)
class ComponentEstimate:
    """A component isolated from its sum, determined up to an l1 sequence."""

    filtered: CoeffSequence
    reconstructed: CoeffSequence
    norm: float
    bezout: Tuple[ShiftPolynomial, ShiftPolynomial]
    window: Tuple[int, int]

    def error(self, truth: CoeffSequence, p: float = 2.0) -> float:
        """Relative l^p distance from a known component over the window."""
        start, stop = self.window
        expected = truth.window(start, stop)
        difference = self.reconstructed.window(start, stop) - expected
        return _lp_norm(difference, p) / _lp_norm(expected, p)


def _lp_norm(values: np.ndarray, p: float) -> float:
    if math.isinf(p):
        return float(np.abs(values).max())
    return float(np.sum(np.abs(values) ** p) ** (1 / p))


def extract_component(
    alpha: CoeffSequence,
    phases: Sequence[float],
    target: int,
    window: Tuple[int, int],
    p: float = 2.0,
    tol: float = COPRIME_TOL,
) -> ComponentEstimate:
    """Isolates the component of `alpha` with phase `phases[target]`.

    Q(T) annihilates the other rotations modulo l1 and U(T) from the Bezout
    pair U Q + V R = 1, with R the rotation annihilator of the target, inverts
    Q on the target component modulo l1.
    """
    if not 0 <= target < len(phases):
        raise ParameterError(f"Target {target} is not an index into {list(phases)}")
    if p < 1:
        raise ParameterError(f"Norm exponent must be at least 1, got {p}")
    for first, second in combinations(phases, 2):
        if circular_distance(first, second) <= tol:
            raise CoprimalityError(
                cmath.exp(-1j * first), f"Phases {first!r} and {second!r} coincide"
            )
    others = [phi for index, phi in enumerate(phases) if index != target]
    q = annihilator(others)
    r = ShiftPolynomial.rotation(phases[target])
    u, v = bezout_coprime(q, r, tol)
    filtered = apply_shift_poly(q, alpha)
    reconstructed = apply_shift_poly(u, filtered)
    start, stop = window
    norm = _lp_norm(reconstructed.window(start, stop), p)
    return ComponentEstimate(filtered, reconstructed, norm, (u, v), (start, stop))


class AlgebraKind(Enum):
    PRODUCT = "product"
    SUM = "sum"
    CONJUGATE = "conjugate"
    SQUARE_SHIFT = "square-shift"


@final
@dataclass(frozen=True)
class AlgebraReport:
    kind: AlgebraKind
    phases: PhaseSet
    budgets: Tuple[float, ...]
    bounds: Tuple[float, ...]
    residual: float
    passed: bool


def product_component(
    first: RotatedBVComponent, second: RotatedBVComponent
) -> RotatedBVComponent:
    """Pointwise product, with rotated variation taken against the phase sum."""
    return RotatedBVComponent(first.seq * second.seq, first.phase + second.phase)


def _product_bound(
    first: RotatedBVComponent, second: RotatedBVComponent, start: int, stop: int
) -> float:
    # e^{i(f+s)} b_{n+1} c_{n+1} - b_n c_n
    #   = e^{if} b_{n+1} (e^{is} c_{n+1} - c_n) + c_n (e^{if} b_{n+1} - b_n)
    top_first = np.abs(first.seq.window(start, stop + 1)).max()
    top_second = np.abs(second.seq.window(start, stop + 1)).max()
    return float(
        top_first * rotated_variation(second, start, stop)
        + top_second * rotated_variation(first, start, stop)
    )


def merge_by_phase(
    inputs: Sequence[RotatedBVComponent], tol: float = COPRIME_TOL
) -> GBVDecomposition:
    """Decomposition of the sum, with components of a common phase added up.

    A merged budget is the sum of the input budgets, or None if any is missing.
    """
    groups: List[List[RotatedBVComponent]] = []
    for comp in inputs:
        for group in groups:
            if circular_distance(group[0].phase, comp.phase) <= tol:
                group.append(comp)
                break
        else:
            groups.append([comp])
    merged = []
    for group in groups:
        seq = group[0].seq
        for comp in group[1:]:
            seq = seq + comp.seq
        budgets = [comp.budget for comp in group]
        budget = None if None in budgets else math.fsum(budgets)
        merged.append(RotatedBVComponent(seq, group[0].phase, budget))
    return GBVDecomposition.of(merged)


def _sum_check(
    inputs: Sequence[RotatedBVComponent], start: int, stop: int
) -> AlgebraReport:
    decomposition = merge_by_phase(inputs)
    values = np.zeros(stop - start, dtype=np.complex128)
    for comp in inputs:
        values += comp.seq.window(start, stop)
    scale = max(1.0, float(np.abs(values).max()) if values.size else 0.0)
    residual = float(
        np.abs(decomposition.composed.window(start, stop) - values).max()
        if values.size
        else 0.0
    )
    phases = PhaseSet(decomposition.phases)
    union = PhaseSet(tuple(comp.phase for comp in inputs))
    variations = [rotated_variation(comp, start, stop) for comp in inputs]
    measured = tuple(
        rotated_variation(comp, start, stop) for comp in decomposition.components
    )
    # triangle inequality against the inputs sharing the phase
    bounds = tuple(
        math.fsum(
            variation
            for comp, variation in zip(inputs, variations)
            if circular_distance(comp.phase, merged.phase) <= COPRIME_TOL
        )
        for merged in decomposition.components
    )
    within_budget = all(
        comp.budget is None or _within(variation, comp.budget)
        for comp, variation in zip(inputs, variations)
    )
    passed = (
        residual <= CHECK_RTOL * scale
        and phases == union
        and all(_within(m, b) for m, b in zip(measured, bounds))
        and within_budget
    )
    return AlgebraReport(AlgebraKind.SUM, phases, measured, bounds, residual, passed)


def gbv_algebra_check(
    kind: AlgebraKind,
    inputs: Sequence[RotatedBVComponent],
    window: Tuple[int, int],
) -> AlgebraReport:
    """Numerically checks one closure property of GBV sequences on a window."""
    start, stop = window
    if not inputs:
        raise ParameterError("Algebra checks need at least one component")
    if kind is AlgebraKind.PRODUCT:
        if len(inputs) != 2:
            raise ParameterError("Product checks take exactly two components")
        first, second = inputs
        product = product_component(first, second)
        measured = rotated_variation(product, start, stop)
        bound = _product_bound(first, second, start, stop)
        return AlgebraReport(
            kind,
            PhaseSet.of(product.phase),
            (measured,),
            (bound,),
            max(0.0, measured - bound),
            _within(measured, bound),
        )
    if kind is AlgebraKind.SUM:
        return _sum_check(inputs, start, stop)
    if kind is AlgebraKind.CONJUGATE:
        conjugates = [comp.conjugate() for comp in inputs]
        measured = tuple(rotated_variation(c, start, stop) for c in conjugates)
        original = tuple(rotated_variation(c, start, stop) for c in inputs)
        residual = max(abs(a - b) for a, b in zip(measured, original))
        phases = PhaseSet(tuple(c.phase for c in conjugates))
        passed = residual <= CHECK_RTOL and phases == -PhaseSet(
            tuple(c.phase for c in inputs)
        )
        return AlgebraReport(kind, phases, measured, original, residual, passed)
    return _square_shift_check(inputs, start, stop)


def square_shift_components(
    inputs: Sequence[RotatedBVComponent],
) -> List[RotatedBVComponent]:
    """Components of a^2 - 1 = (a - 1)^2 + 2 (a - 1), given those of a - 1."""
    components = []
    for first, second in combinations_with_replacement(range(len(inputs)), 2):
        product = product_component(inputs[first], inputs[second])
        factor = 1 if first == second else 2
        components.append(
            RotatedBVComponent(product.seq.scale(factor), product.phase)
        )
    components.extend(comp.scale(2) for comp in inputs)
    return components


def _square_shift_check(
    inputs: Sequence[RotatedBVComponent], start: int, stop: int
) -> AlgebraReport:
    shift = GBVDecomposition.of(inputs).composed.window(start, stop)
    expected = (1 + shift) ** 2 - 1
    components = square_shift_components(inputs)
    composed = GBVDecomposition.of(components).composed.window(start, stop)
    residual = float(np.abs(composed - expected).max())
    measured, bounds = [], []
    for first, second in combinations_with_replacement(range(len(inputs)), 2):
        factor = 1 if first == second else 2
        product = product_component(inputs[first], inputs[second])
        measured.append(factor * rotated_variation(product, start, stop))
        bounds.append(
            factor * _product_bound(inputs[first], inputs[second], start, stop)
        )
    for comp in inputs:
        variation = 2 * rotated_variation(comp, start, stop)
        measured.append(variation)
        bounds.append(variation)
    given = PhaseSet(tuple(comp.phase for comp in inputs))
    phases = PhaseSet(tuple(comp.phase for comp in components))
    passed = (
        residual <= CHECK_RTOL * max(1.0, float(np.abs(expected).max()))
        and phases.issubset((given + given) | given)
        and all(_within(m, b) for m, b in zip(measured, bounds))
    )
    return AlgebraReport(
        AlgebraKind.SQUARE_SHIFT,
        phases,
        tuple(measured),
        tuple(bounds),
        residual,
        passed,
    )


def real_symmetric_form(decomposition: GBVDecomposition) -> GBVDecomposition:
    """Rewrites the decomposition of a real sequence with phases in ± pairs.

    x = (x + conj(x)) / 2, so every component splits into half of itself and
    half of its conjugate, the latter carrying the negated phase.
    """
    components: List[RotatedBVComponent] = []
    for comp in decomposition.components:
        half = comp.scale(0.5)
        components.extend((half, half.conjugate()))
    source = None if decomposition.source is None else decomposition.source.real()
    return GBVDecomposition(tuple(components), source)
