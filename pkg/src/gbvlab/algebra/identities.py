"""Registry of the combinatorial and functional identities behind the expansion.

Integer identities are checked exactly over index ranges; functional ones at
seeded random points, to a relative residual of NUMERIC_RTOL.
"""
from __future__ import annotations

import cmath
import logging
import math
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Any,
    Callable,
    Dict,
    Iterator,
    List,
    Mapping,
    Optional,
    Tuple,
    Union,
    final,
)

import numpy as np

from ..errors import ParameterError, SingularityError
from .binomial import binomial, kronecker
from .coefficients import coeff_omega, coeff_Omega, coeff_xi, coeff_Xi
from .recursion import ExpansionEvaluator
from .symfn import Args, sym_product
from .taylor import chi, exact_log_ratio, log_ratio_series

logger = logging.getLogger(__name__)

NUMERIC_RTOL = 1e-9
REPORTED_FAILURES = 20

Number = Union[int, Fraction, complex, float]


@final
@dataclass(frozen=True)
class Instance:
    point: Tuple[Any, ...]
    residual: float
    passed: bool


@final
@dataclass(frozen=True)
class IdentityReport:
    name: str
    exact: bool
    parameters: Mapping[str, Any]
    instances: Tuple[Instance, ...]
    skipped: int = 0

    @property
    def max_residual(self) -> float:
        return max((instance.residual for instance in self.instances), default=0.0)

    @property
    def passed(self) -> bool:
        return bool(self.instances) and all(i.passed for i in self.instances)

    @property
    def failures(self) -> List[Instance]:
        return [instance for instance in self.instances if not instance.passed]

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "exact": self.exact,
            "parameters": dict(self.parameters),
            "instances": len(self.instances),
            "skipped": self.skipped,
            "max_residual": self.max_residual,
            "passed": self.passed,
            "failures": [
                [_plain(value) for value in instance.point]
                for instance in self.failures[:REPORTED_FAILURES]
            ],
        }


def _plain(value: Any) -> Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Fraction):
        return str(value)
    return value


def exact_instance(point: Tuple[Any, ...], lhs: Number, rhs: Number) -> Instance:
    return Instance(point, float(abs(lhs - rhs)), lhs == rhs)


def numeric_instance(point: Tuple[Any, ...], lhs: Number, rhs: Number) -> Instance:
    residual = abs(lhs - rhs) / max(1.0, abs(rhs))
    return Instance(point, float(residual), residual <= NUMERIC_RTOL)


IdentityCheck = Callable[
    [Mapping[str, Any], np.random.Generator], Iterator[Optional[Instance]]
]


@final
@dataclass(frozen=True)
class Identity:
    name: str
    check: IdentityCheck
    exact: bool
    defaults: Mapping[str, Any] = field(default_factory=dict)


REGISTRY: Dict[str, Identity] = {}


def register(
    name: str, exact: bool, **defaults: Any
) -> Callable[[IdentityCheck], IdentityCheck]:
    def decorator(check: IdentityCheck) -> IdentityCheck:
        REGISTRY[name] = Identity(name, check, exact, defaults)
        return check

    return decorator


def _phases(rng: np.random.Generator, size: int) -> Tuple[float, ...]:
    return tuple(float(v) for v in rng.uniform(0, 2 * math.pi, size))


@register("kronecker-convolution", exact=True, max_index=12)
def _kronecker_convolution(
    params: Mapping[str, Any], rng: np.random.Generator
) -> Iterator[Optional[Instance]]:
    top = params["max_index"]
    for I in range(top + 1):
        for K in range(top + 1):
            for k in range(K + 1):
                lhs = sum(
                    kronecker(i - k) * kronecker(I - i - (K - k)) for i in range(I + 1)
                )
                yield exact_instance((I, K, k), lhs, kronecker(I - K))


@register("vandermonde", exact=True, max_index=12)
def _vandermonde(
    params: Mapping[str, Any], rng: np.random.Generator
) -> Iterator[Optional[Instance]]:
    top = params["max_index"]
    for l in range(top + 1):
        for m in range(top + 1):
            for n in range(top + 1):
                lhs = sum(binomial(m, k) * binomial(n, l - k) for k in range(l + 1))
                yield exact_instance((l, m, n), lhs, binomial(m + n, l))


@register("subset-double-counting", exact=True, max_index=12)
def _subset_double_counting(
    params: Mapping[str, Any], rng: np.random.Generator
) -> Iterator[Optional[Instance]]:
    top = params["max_index"]
    for l in range(top + 1):
        for m in range(top + 1):
            for n in range(top + 1):
                lhs = sum(
                    binomial(m + k, m) * binomial(n + l - k, n) for k in range(l + 1)
                )
                rhs = binomial(l + m + n + 1, m + n + 1)
                yield exact_instance((l, m, n), lhs, rhs)


@register("scaling-relations", exact=True, low=-2, high=6)
def _scaling_relations(
    params: Mapping[str, Any], rng: np.random.Generator
) -> Iterator[Optional[Instance]]:
    box = range(params["low"], params["high"] + 1)
    for I in box:
        for J in box:
            for K in box:
                for L in box:
                    scaled = K * coeff_xi(I, J, K, L) if K else Fraction(0)
                    yield exact_instance(
                        ("Xi", I, J, K, L), coeff_Xi(I, J, K, L), scaled
                    )
    for K in box:
        for a in box:
            for b in box:
                for g in box:
                    for d in box:
                        lhs = (K + g - a) * coeff_Omega(K, a, b, g, d)
                        rhs = K * coeff_omega(K, a, b, g, d)
                        yield exact_instance(("Omega", K, a, b, g, d), lhs, rhs)


@register("xi-self-convolution", exact=True, max_index=6)
def _xi_self_convolution(
    params: Mapping[str, Any], rng: np.random.Generator
) -> Iterator[Optional[Instance]]:
    box = range(params["max_index"] + 1)
    for I in box:
        for J in box:
            for K in box:
                for L in box:
                    for k in range(1, K):
                        lhs = sum(
                            coeff_Xi(i, j, k, l)
                            * coeff_Xi(I - i, J - j, K - k, L - l)
                            for i in range(I + 1)
                            for j in range(J + 1)
                            for l in range(L + 1)
                        )
                        yield exact_instance(
                            (I, J, K, L, k), lhs, coeff_Xi(I, J, K, L)
                        )


@register("omega-convolution", exact=True, max_K=5, max_index=3)
def _omega_convolution(
    params: Mapping[str, Any], rng: np.random.Generator
) -> Iterator[Optional[Instance]]:
    box = range(params["max_index"] + 1)
    for K in range(2, params["max_K"] + 1):
        for k in range(1, K):
            for A in box:
                for B in box:
                    for C in box:
                        for D in box:
                            lhs = sum(
                                coeff_Omega(K - k, A - a, B - b, C - c, D - d)
                                * coeff_Omega(k, a, b, c, d)
                                for a in range(A + 1)
                                for b in range(B + 1)
                                for c in range(C + 1)
                                for d in range(D + 1)
                            )
                            rhs = coeff_Omega(K, A, B, C, D)
                            yield exact_instance((K, k, A, B, C, D), lhs, rhs)


def _index_boxes(
    max_order: int, max_K: int, max_L: int
) -> Iterator[Tuple[int, int, int, int]]:
    for I in range(max_order + 1):
        for J in range(max_order + 1 - I):
            for K in range(1, max_K + 1):
                for L in range(max_L + 1):
                    yield I, J, K, L


PointCheck = Callable[
    [ExpansionEvaluator, Mapping[str, Any], float, Args, Args], Iterator[Instance]
]


def _at_random_points(
    params: Mapping[str, Any], rng: np.random.Generator, per_point: PointCheck
) -> Iterator[Optional[Instance]]:
    """Runs `per_point` at sampled (eta, x, y); a singular point yields None."""
    size = params["max_order"]
    evaluator = ExpansionEvaluator(max_order=size)
    for _ in range(params["points"]):
        eta, *rest = _phases(rng, 1 + 2 * size)
        xs, ys = tuple(rest[:size]), tuple(rest[size:])
        evaluator.clear()
        try:
            found = list(per_point(evaluator, params, eta, xs, ys))
        except SingularityError as exc:
            logger.warning("Skipping a singular sample point: %s", exc)
            yield None
            continue
        yield from found


def product_closure_lhs(
    evaluator: ExpansionEvaluator,
    indices: Tuple[int, int, int, int],
    k: int,
    eta: float,
    xs: Args,
    ys: Args,
) -> complex:
    """sum over i, j, l of G_{i,j,k,l} (.) G_{I-i,J-j,K-k,L-l}."""
    I, J, K, L = indices
    total = 0j
    for i in range(I + 1):
        for j in range(J + 1):
            for l in range(L + 1):
                first = evaluator.symfn("G", i, j, k, l)
                second = evaluator.symfn("G", I - i, J - j, K - k, L - l)
                total += sym_product(first, second)(eta, xs, ys)
    return total


def _product_closure_point(
    evaluator: ExpansionEvaluator,
    params: Mapping[str, Any],
    eta: float,
    xs: Args,
    ys: Args,
) -> Iterator[Optional[Instance]]:
    for I, J, K, L in _index_boxes(
        params["max_order"], params["max_K"], params["max_L"]
    ):
        x_args, y_args = xs[:I], ys[:J]
        for k in range(K + 1):
            lhs = product_closure_lhs(evaluator, (I, J, K, L), k, eta, x_args, y_args)
            rhs = evaluator.G(I, J, K, L, eta, x_args, y_args) if 0 < k < K else 0j
            yield numeric_instance((I, J, K, L, k, eta), lhs, rhs)


@register(
    "g-product-closure", exact=False, max_order=4, max_K=3, max_L=1, points=100
)
def _g_product_closure(
    params: Mapping[str, Any], rng: np.random.Generator
) -> Iterator[Optional[Instance]]:
    return _at_random_points(params, rng, _product_closure_point)


def exchange_sides(
    evaluator: ExpansionEvaluator,
    indices: Tuple[int, int, int, int],
    k: int,
    eta: float,
    xs: Args,
    ys: Args,
) -> Tuple[complex, complex]:
    """Both sides of trading the Xi weights for Omega weights at one k.

    Left:  sum_l Xi_{k,l,k,l} mean G_{I-k,J-l,K-k,L-l}
    Right: sum Omega_{k,a,b,g,d} mean G_{I-a-d,J-b-g,K+g-a,L-b-d}
    """
    I, J, K, L = indices
    lhs = 0j
    for l in range(L + 1):
        shifted = (I - k, J - l, K - k, L - l)
        lhs += coeff_Xi(k, l, k, l) * evaluator.mean("G", shifted, eta, xs, ys)
    rhs = 0j
    for a in range(k, I + 1):
        for d in range(I - a + 1):
            for b in range(J + 1):
                for g in range(min(a - k, J - b) + 1):
                    weight = coeff_Omega(k, a, b, g, d)
                    if weight:
                        shifted = (I - a - d, J - b - g, K + g - a, L - b - d)
                        rhs += weight * evaluator.mean("G", shifted, eta, xs, ys)
    return lhs, rhs


def _exchange_point(
    evaluator: ExpansionEvaluator,
    params: Mapping[str, Any],
    eta: float,
    xs: Args,
    ys: Args,
) -> Iterator[Optional[Instance]]:
    for I, J, K, L in _index_boxes(
        params["max_order"], params["max_K"], params["max_L"]
    ):
        x_args, y_args = xs[:I], ys[:J]
        for k in range(1, params["max_k"] + 1):
            lhs, rhs = exchange_sides(evaluator, (I, J, K, L), k, eta, x_args, y_args)
            yield numeric_instance((I, J, K, L, k, eta), lhs, rhs)


@register(
    "xi-omega-exchange",
    exact=False,
    max_order=4,
    max_K=3,
    max_L=1,
    max_k=2,
    points=100,
)
def _xi_omega_exchange(
    params: Mapping[str, Any], rng: np.random.Generator
) -> Iterator[Optional[Instance]]:
    return _at_random_points(params, rng, _exchange_point)


@register("chi-product", exact=False, points=100)
def _chi_product(
    params: Mapping[str, Any], rng: np.random.Generator
) -> Iterator[Optional[Instance]]:
    points = [(1.0, 0.3, 0.7)]
    points.extend(_phases(rng, 3) for _ in range(params["points"]))
    for eta, phi_l, phi_m in points:
        lhs = (1 + chi(eta - phi_l) + chi(eta - phi_m)) * chi(2 * eta - phi_l - phi_m)
        rhs = chi(eta - phi_l) * chi(eta - phi_m)
        yield numeric_instance((eta, phi_l, phi_m), lhs, rhs)


@register("chi-real-part", exact=False, points=100)
def _chi_real_part(
    params: Mapping[str, Any], rng: np.random.Generator
) -> Iterator[Optional[Instance]]:
    for _ in range(params["points"]):
        eta, phi = _phases(rng, 2)
        yield numeric_instance((eta, phi), (0.5 + chi(eta - phi)).real, 0.0)


@register("zero-phase-real-part", exact=False, max_I=2, points=100)
def _zero_phase_real_part(
    params: Mapping[str, Any], rng: np.random.Generator
) -> Iterator[Optional[Instance]]:
    evaluator = ExpansionEvaluator(c=0)
    for _ in range(params["points"]):
        eta, phi = _phases(rng, 2)
        for I in range(1, params["max_I"] + 1):
            value = evaluator.f(I, I, 0, 0, eta, (phi,) * I, (phi,) * I)
            yield numeric_instance((I, eta, phi), value.real, 0.0)


@register("log-ratio-series", exact=False, order=6, max_modulus=1e-2, points=100)
def _log_ratio_series(
    params: Mapping[str, Any], rng: np.random.Generator
) -> Iterator[Optional[Instance]]:
    for _ in range(params["points"]):
        modulus = float(rng.uniform(0, params["max_modulus"]))
        direction, omega = _phases(rng, 2)
        alpha = modulus * cmath.exp(1j * direction)
        for c in (0, 1):
            series = log_ratio_series(alpha, omega, c, params["order"])
            exact = exact_log_ratio(alpha, omega, c)
            yield numeric_instance((c, alpha, omega), series, exact)


def verify_identity(
    which: str, params: Optional[Mapping[str, Any]] = None, seed: int = 0
) -> IdentityReport:
    """Checks one registered identity over its parameter ranges."""
    try:
        identity = REGISTRY[which]
    except KeyError:
        raise ParameterError(
            f"Unknown identity {which!r}; known: {sorted(REGISTRY)}"
        ) from None
    params = dict(params or {})
    unknown = set(params) - set(identity.defaults)
    if unknown:
        raise ParameterError(f"Unknown parameters for {which!r}: {sorted(unknown)}")
    merged = {**identity.defaults, **params}
    rng = np.random.default_rng([seed, zlib.crc32(which.encode())])
    instances: List[Instance] = []
    skipped = 0
    for instance in identity.check(merged, rng):
        if instance is None:
            skipped += 1
        else:
            instances.append(instance)
    report = IdentityReport(which, identity.exact, merged, tuple(instances), skipped)
    logger.info(
        "%s: %d instances, max residual %.3e, %s",
        which,
        len(instances),
        report.max_residual,
        "passed" if report.passed else "FAILED",
    )
    return report


def verify_all(
    params: Optional[Mapping[str, Mapping[str, Any]]] = None, seed: int = 0
) -> List[IdentityReport]:
    params = params or {}
    unknown = set(params) - set(REGISTRY)
    if unknown:
        raise ParameterError(f"Unknown identities: {sorted(unknown)}")
    return [verify_identity(name, params.get(name), seed) for name in REGISTRY]
