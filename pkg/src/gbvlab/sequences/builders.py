"""Constructors for the example sequence families and their decompositions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from ..errors import ParameterError, SchemaError
from .base import CoeffSequence, GBVDecomposition, RotatedBVComponent


@dataclass(frozen=True)
class WvnTerm:
    lam: float
    phi: float
    alpha: float
    gamma: float


@dataclass(frozen=True)
class ModulatedPowerLaw:
    """n -> z e^{-i(n phase + offset)} (n + shift)^{-exponent} for n >= n0, else 0."""

    z: complex
    phase: float
    exponent: float
    n0: int = 1
    shift: float = 0.0
    offset: float = 0.0

    def __call__(self, n: np.ndarray) -> np.ndarray:
        active = n >= self.n0
        base = np.where(active, n + self.shift, 1.0).astype(np.float64)
        values = self.z * np.exp(-1j * (n * self.phase + self.offset))
        return np.where(active, values * base ** (-self.exponent), 0j)


@dataclass(frozen=True)
class WvnPotential:
    terms: Sequence[WvnTerm]
    n0: int = 1

    def __call__(self, n: np.ndarray) -> np.ndarray:
        active = n >= self.n0
        base = np.where(active, n, 1).astype(np.float64)
        total = np.zeros(n.shape, dtype=np.float64)
        for term in self.terms:
            total += term.lam * np.cos(n * term.phi + term.alpha) / base ** term.gamma
        return np.where(active, total, 0.0).astype(np.complex128)


@dataclass(frozen=True)
class PowerTail:
    """Telescoped variation beyond an index: scale * (index + shift)^-exponent."""

    scale: float
    exponent: float
    shift: float = 0.0
    n0: int = 1

    def __call__(self, index: int) -> float:
        return self.scale * (max(index, self.n0) + self.shift) ** (-self.exponent)


def wigner_von_neumann(
    terms: Iterable[WvnTerm],
    tail: Optional[CoeffSequence] = None,
    tail_l1: Optional[float] = None,
    n0: int = 1,
) -> GBVDecomposition:
    """V_n = sum_k lam_k cos(n phi_k + alpha_k) / n^gamma_k + W_n for n >= n0.

    Each cosine is split into the phases +phi_k and -phi_k; the l1 tail W is a
    phase-0 component whose rotated variation is at most twice its l1 norm.
    """
    terms = tuple(terms)
    if n0 < 1:
        raise ParameterError(f"Start index n0 must be positive, got {n0}")
    components: List[RotatedBVComponent] = []
    bound = 0.0
    for term in terms:
        if term.gamma <= 0:
            raise ParameterError(f"Decay exponent gamma must be positive: {term}")
        half = 0.5 * term.lam
        budget = 2 * abs(half) * n0 ** (-term.gamma)
        tail_bound = PowerTail(abs(half), term.gamma, n0=n0)
        for sign in (1, -1):
            func = ModulatedPowerLaw(
                half, sign * term.phi, term.gamma, n0, offset=sign * term.alpha
            )
            seq = CoeffSequence(func, 0, abs(half), "wvn")
            components.append(
                RotatedBVComponent(seq, sign * term.phi, budget, tail_bound)
            )
        bound += abs(term.lam)
    source = CoeffSequence(WvnPotential(terms, n0), 0, bound, "wvn")
    if tail is not None:
        if tail_l1 is None:
            raise ParameterError("An l1 tail needs a declared l1 budget")
        components.append(RotatedBVComponent(tail, 0.0, 2 * tail_l1))
        source = source + tail
    return GBVDecomposition(tuple(components), source)


def power_law_rotated(
    z: complex, phase: float, p: int, n0: int = 1
) -> RotatedBVComponent:
    """beta_n = z e^{-i n phase} n^{-1/(p-1)} for n >= n0 and 0 below.

    The modulation cancels exactly against the phase, so the rotated variation
    from n0 on telescopes to |z| n0^{-1/(p-1)}; the declared budget also covers
    the switch-on jump at n0.
    """
    if p < 2:
        raise ParameterError(f"Exponent index p must be at least 2, got {p}")
    if n0 < 1:
        raise ParameterError(f"Start index n0 must be positive, got {n0}")
    exponent = 1 / (p - 1)
    func = ModulatedPowerLaw(complex(z), phase, exponent, n0)
    seq = CoeffSequence(func, 0, abs(z) * n0 ** (-exponent), "power")
    budget = 2 * abs(z) * n0 ** (-exponent)
    return RotatedBVComponent(seq, phase, budget, PowerTail(abs(z), exponent, n0=n0))


def counterexample_sequence(phase: float, shift: int = 2) -> RotatedBVComponent:
    """beta_n = e^{-i n phase} / (n + shift)^{1/2}, starting at n = 0.

    With shift >= 2 every term lies in the open unit disk, so the sequence is an
    admissible Verblunsky sequence in every l^p with p > 2.
    """
    if shift < 2:
        raise ParameterError(f"Shift must be at least 2, got {shift}")
    func = ModulatedPowerLaw(1 + 0j, phase, 0.5, 0, shift=shift)
    budget = shift ** -0.5
    seq = CoeffSequence(func, 0, budget, "counterexample")
    return RotatedBVComponent(seq, phase, budget, PowerTail(1.0, 0.5, shift, n0=0))


def _complex(value: Any, key: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) for v in value)
    ):
        return complex(value[0], value[1])
    raise SchemaError(f"Field {key!r} must be a number or a [re, im] pair")


def _number(spec: Mapping[str, Any], key: str, default: Any = None) -> float:
    value = spec.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"Field {key!r} must be a number, got {value!r}")
    return float(value)


def _integer(spec: Mapping[str, Any], key: str, default: Any = None) -> int:
    value = spec.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"Field {key!r} must be an integer, got {value!r}")
    return value


SEQUENCE_FIELDS = {
    "zero": {"type"},
    "constant": {"type", "value"},
    "values": {"type", "values", "start"},
    "wvn": {"type", "terms", "n0"},
    "power": {"type", "z", "phi", "p", "n0"},
    "counterexample": {"type", "phi", "shift"},
    "sum": {"type", "terms"},
}
WVN_TERM_FIELDS = {"lambda", "phi", "alpha", "gamma"}


def sequence_from_spec(spec: Mapping[str, Any]) -> GBVDecomposition:
    """Builds a decomposition from its JSON description, validating field names."""
    if not isinstance(spec, Mapping):
        raise SchemaError(f"Sequence description must be an object, got {spec!r}")
    kind = spec.get("type")
    if kind not in SEQUENCE_FIELDS:
        raise SchemaError(f"Unknown sequence type {kind!r}")
    unknown = set(spec) - SEQUENCE_FIELDS[kind]
    if unknown:
        raise SchemaError(f"Unknown fields for {kind!r} sequence: {sorted(unknown)}")
    try:
        return _build(kind, spec)
    except ParameterError as exc:
        raise SchemaError(str(exc)) from exc


def _build(kind: str, spec: Mapping[str, Any]) -> GBVDecomposition:
    if kind == "zero":
        seq = CoeffSequence.zero()
        return GBVDecomposition((RotatedBVComponent(seq, 0.0, 0.0),), seq)
    if kind == "constant":
        seq = CoeffSequence.constant(_complex(spec.get("value"), "value"))
        return GBVDecomposition((RotatedBVComponent(seq, 0.0, 0.0),), seq)
    if kind == "values":
        values = spec.get("values")
        if not isinstance(values, list):
            raise SchemaError("Field 'values' must be a list")
        seq = CoeffSequence.from_values(
            [_complex(v, "values") for v in values], _integer(spec, "start", 0)
        )
        return GBVDecomposition((RotatedBVComponent(seq, 0.0),), seq)
    if kind == "wvn":
        terms = spec.get("terms", [])
        if not isinstance(terms, list):
            raise SchemaError("Field 'terms' must be a list")
        return wigner_von_neumann(
            [_wvn_term(term) for term in terms], n0=_integer(spec, "n0", 1)
        )
    if kind == "power":
        component = power_law_rotated(
            _complex(spec.get("z", 1.0), "z"),
            _number(spec, "phi"),
            _integer(spec, "p"),
            _integer(spec, "n0", 1),
        )
        return GBVDecomposition((component,), component.seq)
    if kind == "counterexample":
        component = counterexample_sequence(
            _number(spec, "phi"), _integer(spec, "shift", 2)
        )
        return GBVDecomposition((component,), component.seq)
    terms = spec.get("terms")
    if not isinstance(terms, list) or not terms:
        raise SchemaError("Field 'terms' must be a non-empty list")
    total = sequence_from_spec(terms[0])
    for term in terms[1:]:
        total = total + sequence_from_spec(term)
    return total


def _wvn_term(term: Any) -> WvnTerm:
    if not isinstance(term, Mapping):
        raise SchemaError(f"Wigner-von Neumann term must be an object, got {term!r}")
    unknown = set(term) - WVN_TERM_FIELDS
    if unknown:
        raise SchemaError(f"Unknown fields in wvn term: {sorted(unknown)}")
    return WvnTerm(
        lam=_number(term, "lambda"),
        phi=_number(term, "phi"),
        alpha=_number(term, "alpha", 0.0),
        gamma=_number(term, "gamma"),
    )
