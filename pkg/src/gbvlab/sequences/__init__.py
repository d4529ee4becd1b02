from .base import CoeffSequence, GBVDecomposition, RotatedBVComponent
from .builders import (
    counterexample_sequence,
    power_law_rotated,
    sequence_from_spec,
    wigner_von_neumann,
)
from .shift import ShiftPolynomial, annihilator, apply_shift_poly, bezout_coprime
from .variation import (
    AlgebraKind,
    certify,
    extract_component,
    gbv_algebra_check,
    real_symmetric_form,
    rotated_variation,
)

__all__ = (
    "AlgebraKind",
    "CoeffSequence",
    "GBVDecomposition",
    "RotatedBVComponent",
    "ShiftPolynomial",
    "annihilator",
    "apply_shift_poly",
    "bezout_coprime",
    "certify",
    "counterexample_sequence",
    "extract_component",
    "gbv_algebra_check",
    "power_law_rotated",
    "real_symmetric_form",
    "rotated_variation",
    "sequence_from_spec",
    "wigner_von_neumann",
)
