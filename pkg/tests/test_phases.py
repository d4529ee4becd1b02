import cmath
import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gbvlab.errors import ParameterError
from gbvlab.models import ModelTag
from gbvlab.phases import (
    PhaseSet,
    Variant,
    canonical,
    circular_distance,
    critical_set_Ap,
    exceptional_S,
    k_fold_sum,
    refine_exceptional,
    spectral_point,
)

PHI = 1.0
TURNS = st.lists(
    st.fractions(min_value=0, max_value=1, max_denominator=12), min_size=1, max_size=3
)


def brute_fold(turns, k):
    """k-fold sums of rational turns, reduced exactly modulo one turn."""
    sums = {Fraction(0)}
    for _ in range(k):
        sums = {(a + b) % 1 for a, b in product(sums, turns)}
    return sums


def as_phases(turns):
    return PhaseSet(tuple(float(2 * math.pi * t) for t in turns))


@pytest.mark.parametrize(
    "phase, expected",
    [
        pytest.param(-math.pi / 2, 3 * math.pi / 2, id="negative"),
        pytest.param(5 * math.pi, math.pi, id="several turns"),
        pytest.param(2 * math.pi, 0.0, id="full turn"),
    ],
)
def test_canonical(phase, expected):
    assert canonical(phase) == pytest.approx(expected)


def test_circular_distance_wraps():
    assert circular_distance(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)


def test_phase_set_dedup():
    phases = PhaseSet.of(1.0, 1.0 + 2 * math.pi, 1.0 + 1e-12, -1.0)
    assert len(phases) == 2
    assert phases.phases == pytest.approx((1.0, 2 * math.pi - 1.0))
    assert -1.0 in phases
    assert "x" not in phases


def test_phase_set_arithmetic():
    first = PhaseSet.of(0.5, 1.0)
    assert first + PhaseSet.zero() == first
    assert first - first == PhaseSet.of(0.0, 0.5, -0.5)
    assert (first | PhaseSet.of(2.0)) == PhaseSet.of(0.5, 1.0, 2.0)
    assert PhaseSet().distance(1.0) == math.inf
    assert first.distance(0.6) == pytest.approx(0.1)


@given(TURNS, st.integers(0, 3))
def test_k_fold_sum_matches_exact_enumeration(turns, k):
    expected = as_phases(brute_fold(set(turns), k))
    assert k_fold_sum(as_phases(turns), k) == expected


def test_k_fold_sum_rejects_negative():
    with pytest.raises(ParameterError):
        k_fold_sum(PhaseSet.of(1.0), -1)


@pytest.mark.parametrize(
    "phases, p, model, expected",
    [
        pytest.param((PHI,), 1, ModelTag.OPUC, (), id="opuc p=1"),
        pytest.param((PHI, 2.0), 2, ModelTag.OPUC, (PHI, 2.0), id="opuc p=2"),
        pytest.param((PHI,), 3, ModelTag.OPUC, (PHI,), id="opuc p=3"),
        pytest.param((PHI,), 1, ModelTag.OPRL, (0.0,), id="oprl p=1"),
        pytest.param((PHI,), 2, ModelTag.OPRL, (PHI, 0.0), id="oprl p=2"),
        pytest.param(
            (PHI, -PHI),
            3,
            ModelTag.OPRL,
            (2 * PHI, 0.0, -2 * PHI, PHI, -PHI),
            id="oprl p=3",
        ),
    ],
)
def test_critical_set(phases, p, model, expected):
    assert critical_set_Ap(PhaseSet(phases), p, model) == PhaseSet(expected)


def test_critical_set_opuc_p5():
    """(A + A) - A for a single phase is {phi}."""
    assert critical_set_Ap(PhaseSet.of(PHI), 5, ModelTag.OPUC) == PhaseSet.of(PHI)


@pytest.mark.parametrize(
    "p, model",
    [
        pytest.param(4, ModelTag.OPUC, id="even opuc"),
        pytest.param(0, ModelTag.OPRL, id="zero"),
    ],
)
def test_critical_set_errors(p, model):
    with pytest.raises(ParameterError):
        critical_set_Ap(PhaseSet.of(PHI), p, model)


def test_exceptional_opuc():
    exceptional = exceptional_S(PhaseSet.of(PHI), 3, ModelTag.OPUC, Variant.OPUC)
    (point,) = exceptional
    assert point.point == pytest.approx(cmath.exp(1j * PHI))
    assert not point.boundary


def test_exceptional_oprl():
    phases = PhaseSet.of(PHI, -PHI)
    exceptional = exceptional_S(phases, 2, ModelTag.OPRL, Variant.OPRL)
    points = {round(point.point, 12): point.boundary for point in exceptional}
    x = round(2 * math.cos(PHI / 2), 12)
    assert points == {x: False, -x: False, 2.0: True}


def test_exceptional_oprl_squares():
    phases = PhaseSet.of(PHI)
    plain = exceptional_S(phases, 2, ModelTag.OPRL, Variant.OPRL)
    squares = exceptional_S(phases, 2, ModelTag.OPRL, Variant.OPRL_SQUARES)
    assert plain.generators.issubset(squares.generators)
    assert 2 * PHI in squares.generators


def test_exceptional_oprl_folds():
    phases = PhaseSet.of(PHI, -PHI)
    exceptional = exceptional_S(phases, 2, ModelTag.OPRL, Variant.OPRL_FOLDS)
    assert exceptional.generators == phases
    assert not any(point.boundary for point in exceptional)


def test_exceptional_variant_mismatch():
    with pytest.raises(ParameterError):
        exceptional_S(PhaseSet.of(PHI), 3, ModelTag.OPUC, Variant.OPRL)


def test_refine_exceptional():
    exceptional = exceptional_S(PhaseSet.of(PHI), 2, ModelTag.OPRL, Variant.OPRL)
    refined = refine_exceptional(exceptional, [0.0])
    assert refined.etas == pytest.approx((PHI,))
    assert refined.to_json() == [
        {"point": spectral_point(PHI, ModelTag.OPRL), "eta": PHI, "boundary": False}
    ]


def test_spectral_point_json():
    exceptional = exceptional_S(PhaseSet.of(PHI), 3, ModelTag.OPUC, Variant.OPUC)
    (entry,) = exceptional.to_json()
    assert entry["point"] == pytest.approx([math.cos(PHI), math.sin(PHI)])
