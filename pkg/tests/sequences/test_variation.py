import math

import numpy as np
import pytest

from gbvlab.errors import CoprimalityError, DomainError, ParameterError
from gbvlab.phases import PhaseSet
from gbvlab.sequences import (
    AlgebraKind,
    CoeffSequence,
    GBVDecomposition,
    RotatedBVComponent,
    certify,
    extract_component,
    gbv_algebra_check,
    power_law_rotated,
    real_symmetric_form,
    rotated_variation,
    wigner_von_neumann,
)
from gbvlab.sequences.builders import WvnTerm
from gbvlab.sequences.variation import (
    boundedness_check,
    merge_by_phase,
    product_component,
    square_shift_components,
)

from .helpers import naive_rotated_variation


@pytest.fixture
def two_phase():
    """1/n components rotating with phases 1 and 2."""
    first = power_law_rotated(1.0, 1.0, 2)
    second = power_law_rotated(1.0, 2.0, 2)
    return first, second


def test_exact_rotation_has_no_variation():
    comp = power_law_rotated(0.5, 0.8, 2)
    rotated = RotatedBVComponent(
        CoeffSequence.from_values([np.exp(-0.8j * n) for n in range(100)]), 0.8
    )
    assert rotated_variation(rotated, 0, 99) == pytest.approx(0, abs=1e-12)
    assert rotated_variation(comp, 1, 1000) == pytest.approx(0.5 * (1 - 1 / 1000))


@pytest.mark.parametrize(
    "comp",
    [
        pytest.param(power_law_rotated(0.3 + 0.4j, 2.0, 3), id="power law"),
        pytest.param(
            RotatedBVComponent(
                CoeffSequence.from_values(np.linspace(0, 1, 40) ** 2), 0.4
            ),
            id="tabulated",
        ),
    ],
)
def test_rotated_variation_matches_naive(comp):
    assert rotated_variation(comp, 0, 30) == pytest.approx(
        naive_rotated_variation(comp, 0, 30), rel=1e-12
    )


def test_variation_window_errors():
    comp = RotatedBVComponent(CoeffSequence.zero(start_index=5), 0.0)
    with pytest.raises(DomainError):
        rotated_variation(comp, 2, 10)
    with pytest.raises(DomainError):
        rotated_variation(comp, 10, 6)


def test_certify_power_law():
    """The budget covers the switch-on jump and the telescoping tail."""
    certificate = certify(power_law_rotated(2.0, 1.3, 2, n0=4), cutoff=10 ** 4)
    assert certificate.measured == pytest.approx(2 * 0.5 - 2 * 1e-4, rel=1e-9)
    assert certificate.tail == pytest.approx(2 * 1e-4)
    assert certificate.total == pytest.approx(certificate.budget)
    assert certificate.passed


def test_certify_without_budget():
    comp = RotatedBVComponent(CoeffSequence.from_values([1, 0.5] * 20), 0.0)
    certificate = certify(comp, cutoff=30)
    assert certificate.budget is None
    assert not certificate.passed


def test_certify_over_budget():
    comp = power_law_rotated(1.0, 0.5, 2)
    tight = RotatedBVComponent(comp.seq, comp.phase, 0.1, comp.tail)
    assert not certify(tight, cutoff=1000).passed


def test_boundedness_check():
    report = boundedness_check(power_law_rotated(1.0, 0.7, 2), 5, 500)
    assert report.max_modulus == pytest.approx(0.2)
    assert report.passed


def test_extract_component_bezout_pair():
    """Phases [0, π]: Q = T - 1 and R = -T - 1 give U = V = -1/2."""
    alpha = GBVDecomposition.of(
        [power_law_rotated(1.0, 0.0, 2), power_law_rotated(1.0, math.pi, 2)]
    ).composed
    estimate = extract_component(alpha, [0.0, math.pi], 1, (100, 10 ** 4))
    u, v = estimate.bezout
    assert u.coefficients == pytest.approx((-0.5,))
    assert v.coefficients == pytest.approx((-0.5,))
    truth = power_law_rotated(1.0, math.pi, 2).seq
    assert estimate.error(truth) < 0.05


def test_extract_component_two_phases(two_phase):
    first, second = two_phase
    alpha = first.seq + second.seq
    for target, truth in enumerate(two_phase):
        estimate = extract_component(alpha, [1.0, 2.0], target, (100, 10 ** 4))
        assert estimate.error(truth.seq) < 0.05
        u, v = estimate.bezout
        assert u.degree == 0


def test_extract_component_norm(two_phase):
    first, second = two_phase
    estimate = extract_component(first.seq + second.seq, [1.0, 2.0], 0, (100, 200))
    expected = np.linalg.norm(first.seq.window(100, 200))
    assert estimate.norm == pytest.approx(expected, rel=0.05)


@pytest.mark.parametrize(
    "phases, target",
    [
        pytest.param([1.0, 1.0 + 2 * math.pi], 0, id="equal modulo 2π"),
        pytest.param([0.5, 2.0, 0.5], 1, id="repeated other phase"),
    ],
)
def test_extract_component_coincident_phases(phases, target):
    with pytest.raises(CoprimalityError):
        extract_component(CoeffSequence.zero(), phases, target, (0, 10))


@pytest.mark.parametrize(
    "target, p",
    [pytest.param(2, 2.0, id="bad target"), pytest.param(0, 0.5, id="bad p")],
)
def test_extract_component_parameters(target, p):
    with pytest.raises(ParameterError):
        extract_component(CoeffSequence.zero(), [0.0, 1.0], target, (0, 10), p=p)


def test_product_rule(two_phase):
    report = gbv_algebra_check(AlgebraKind.PRODUCT, two_phase, (1, 2000))
    assert report.passed
    assert report.phases == PhaseSet.of(3.0)
    assert report.budgets[0] <= report.bounds[0]


def test_product_component_phase(two_phase):
    product = product_component(*two_phase)
    assert product.phase == pytest.approx(3.0)
    assert product.seq(2) == pytest.approx(np.exp(-6j) / 4)


def test_sum_rule(two_phase):
    report = gbv_algebra_check(AlgebraKind.SUM, two_phase, (1, 500))
    assert report.passed
    assert report.phases == PhaseSet.of(1.0, 2.0)
    assert report.budgets == pytest.approx(report.bounds)


def test_sum_rule_merges_common_phases(two_phase):
    first, second = two_phase
    inputs = [first, second, first.scale(-0.5)]
    merged = merge_by_phase(inputs)
    assert len(merged.components) == 2
    assert merged.components[0].budget == pytest.approx(3.0)
    assert merged.components[0].seq(4) == pytest.approx(0.5 * first.seq(4))
    report = gbv_algebra_check(AlgebraKind.SUM, inputs, (1, 500))
    assert report.passed
    # cancellation makes the merged variation smaller than the input sum
    assert report.budgets[0] < report.bounds[0]


@pytest.mark.parametrize(
    "component",
    [
        pytest.param(
            RotatedBVComponent(power_law_rotated(1.0, 1.0, 2).seq, 1.0, 0.1),
            id="understated budget",
        ),
        pytest.param(
            RotatedBVComponent(power_law_rotated(1.0, 1.0, 2).seq, 2.5, 2.0),
            id="wrong phase",
        ),
    ],
)
def test_sum_rule_rejects_bad_components(two_phase, component):
    report = gbv_algebra_check(AlgebraKind.SUM, [*two_phase, component], (1, 500))
    assert not report.passed


def test_decomposition_sum_matches_pointwise_sum():
    first = wigner_von_neumann([WvnTerm(lam=1.0, phi=1.0, alpha=0.0, gamma=1.0)])
    second = wigner_von_neumann([WvnTerm(lam=0.5, phi=1.0, alpha=0.4, gamma=0.8)])
    total = first + second
    expected = first.sequence.window(1, 300) + second.sequence.window(1, 300)
    assert total.sequence.window(1, 300) == pytest.approx(expected)
    assert total.residual(1, 300) < 1e-12
    merged = merge_by_phase(total.components)
    assert PhaseSet(merged.phases) == PhaseSet.of(1.0, -1.0)
    assert merged.composed.window(1, 300) == pytest.approx(expected)
    report = gbv_algebra_check(AlgebraKind.SUM, total.components, (1, 300))
    assert report.passed


def test_conjugate_rule(two_phase):
    report = gbv_algebra_check(AlgebraKind.CONJUGATE, two_phase, (1, 500))
    assert report.passed
    assert report.phases == PhaseSet.of(-1.0, -2.0)


def test_square_shift_rule(two_phase):
    small = [comp.scale(0.25) for comp in two_phase]
    report = gbv_algebra_check(AlgebraKind.SQUARE_SHIFT, small, (1, 500))
    assert report.passed
    given = PhaseSet.of(1.0, 2.0)
    assert report.phases.issubset((given + given) | given)


def test_square_shift_component_count(two_phase):
    # two squares, one cross term and two linear terms
    assert len(square_shift_components(two_phase)) == 5


def test_algebra_check_arity():
    with pytest.raises(ParameterError):
        gbv_algebra_check(AlgebraKind.PRODUCT, [power_law_rotated(1, 0, 2)], (1, 5))
    with pytest.raises(ParameterError):
        gbv_algebra_check(AlgebraKind.SUM, [], (1, 5))


def test_real_symmetric_form():
    potential = wigner_von_neumann([WvnTerm(lam=1.0, phi=1.2, alpha=0.3, gamma=1.0)])
    symmetric = real_symmetric_form(potential)
    phases = PhaseSet(symmetric.phases)
    assert phases == -phases
    assert symmetric.residual(1, 400) < 1e-12
    assert np.abs(symmetric.composed.window(1, 400).imag).max() < 1e-12
