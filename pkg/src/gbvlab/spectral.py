"""Spectral diagnostics built on Pruefer trajectories.

Bernstein-Szegő densities, their interval masses, uniform-convergence
diagnostics on intervals away from the exceptional set and power-law drift
scans at its points.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import (
    Any,
    Dict,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
    final,
)

import numpy as np
from scipy.integrate import simpson
from scipy.stats import linregress

from .errors import ParameterError, ResolutionError, SingularityError
from .models import ModelTag
from .phases import ExceptionalSet, canonical, circular_distance
from .pruefer.coefficients import check_regular
from .pruefer.direct import DIRECT_GUARD, jacobi_quadratic_form
from .pruefer.step import trajectory_grid
from .typing import Coefficients, Mapper

logger = logging.getLogger(__name__)

MASS_TOL = 1e-8
SANDWICH_RTOL = 1e-9
CONVERGENCE_THRESHOLD = 1e-2
RESONANT_SLOPE = 0.05
CONTROL_SLOPE = 5e-3
MIN_SCAN_STEPS = 10 ** 4
FIT_FRACTION = 0.1
FIT_SAMPLES = 2000


@final
@dataclass(frozen=True, eq=False)
class MeasureProbe:
    """The n-th Bernstein-Szegő approximant sampled on an eta grid.

    `log_form` is log(a_n^2 p_n^2 + p_{n-1}^2) for OPRL probes and None for OPUC.
    """

    model: ModelTag
    n: int
    grid: np.ndarray
    density: np.ndarray
    log_r: np.ndarray
    log_form: Optional[np.ndarray] = None

    @property
    def weight(self) -> np.ndarray:
        """Density per unit eta; OPRL densities carry the Jacobian |dx/deta|."""
        if self.model is ModelTag.OPUC:
            return self.density
        return self.density * np.abs(np.sin(self.grid / 2))

    def to_rows(self) -> Iterator[Tuple[float, float]]:
        for eta, density in zip(self.grid, self.density):
            yield float(eta), float(density)


def oprl_form_from_prufer(
    log_r: np.ndarray, theta: np.ndarray, eta: np.ndarray, n: int
) -> np.ndarray:
    """log(a_n^2 p_n^2 + p_{n-1}^2) recovered from log r_n and theta_n."""
    psi = n * eta / 2 + theta
    half = np.sin(eta / 2)
    ratio = (np.cos(psi) + np.sin(psi) * np.cos(eta / 2) / half) ** 2 + (
        np.sin(psi) / half
    ) ** 2
    return 2 * log_r + np.log(ratio)


def density_probe(
    coeffs: Coefficients,
    n: int,
    grid: Sequence[float],
    guard: int = DIRECT_GUARD,
    mapper: Optional[Mapper] = None,
    chunks: int = 1,
) -> MeasureProbe:
    """Samples 1/(2π r_n^2) (OPUC) or 1/(π (a_n^2 p_n^2 + p_{n-1}^2)) (OPRL)."""
    if n < 0:
        raise ParameterError(f"Probe index must be non-negative, got {n}")
    eta = np.asarray(grid, dtype=np.float64)
    model = coeffs.model
    if model is ModelTag.OPRL:
        check_regular(eta)
    trajectory = trajectory_grid(
        coeffs, eta, n, stride=max(n, 1), mapper=mapper, chunks=chunks
    )
    log_r = trajectory.final_log_r
    if model is ModelTag.OPUC:
        density = np.exp(-2 * log_r) / (2 * math.pi)
        return MeasureProbe(model, n, eta, density, log_r)
    if n <= guard:
        log_form = oprl_form_from_prufer(log_r, trajectory.final_theta, eta, n)
    else:
        log_form, _ = jacobi_quadratic_form(coeffs, eta, n)  # type: ignore[arg-type]
    density = np.exp(-log_form) / math.pi
    logger.debug("Probed n=%d density on %d points", n, len(eta))
    return MeasureProbe(model, n, eta, density, log_r, log_form)


@final
@dataclass(frozen=True)
class SandwichReport:
    """r_n^2 / (a_n^2 p_n^2 + p_{n-1}^2) against [eps, 2 - eps], eps = (2 - |x|) / 2."""

    ratio_min: float
    ratio_max: float
    worst_margin: float
    passed: bool


def oprl_sandwich(probe: MeasureProbe, rtol: float = SANDWICH_RTOL) -> SandwichReport:
    if probe.model is not ModelTag.OPRL or probe.log_form is None:
        raise ParameterError("The quadratic-form sandwich applies to OPRL probes only")
    ratio = np.exp(2 * probe.log_r - probe.log_form)
    eps = 1 - np.abs(np.cos(probe.grid / 2))
    margin = np.minimum(ratio - eps * (1 - rtol), (2 - eps) * (1 + rtol) - ratio)
    worst = float(margin.min())
    return SandwichReport(float(ratio.min()), float(ratio.max()), worst, worst >= 0)


def _integration_nodes(
    probe: MeasureProbe, sub: Tuple[float, float]
) -> Tuple[np.ndarray, np.ndarray]:
    lo, hi = sub
    grid = probe.grid
    slack = 1e-12 * max(1.0, float(np.abs(grid).max()))
    if not lo < hi:
        raise ParameterError(f"Empty integration interval {sub}")
    if lo < grid[0] - slack or hi > grid[-1] + slack:
        raise ParameterError(
            f"Interval {sub} is not covered by the probe grid "
            f"[{grid[0]!r}, {grid[-1]!r}]"
        )
    inside = (grid > lo + slack) & (grid < hi - slack)
    nodes = np.concatenate(([lo], grid[inside], [hi]))
    values = np.interp(nodes, grid, probe.weight)
    return nodes, values


def interval_mass(
    probe: MeasureProbe, sub: Tuple[float, float], tol: float = MASS_TOL
) -> float:
    """Composite Simpson over `sub`, refined dyadically down to the probe grid.

    Raises ResolutionError carrying the finest estimate when two successive
    levels never agree to within `tol`.
    """
    nodes, values = _integration_nodes(probe, sub)
    strides: List[int] = []
    stride = 1
    while (len(nodes) - 1) // stride >= 2:
        strides.append(stride)
        stride *= 2
    if len(strides) < 2:
        raise ResolutionError(
            float(simpson(values, x=nodes)),
            f"Interval {sub} holds too few grid points to refine",
        )
    estimates = []
    for stride in reversed(strides):
        picked = np.arange(0, len(nodes), stride)
        if picked[-1] != len(nodes) - 1:
            picked = np.append(picked, len(nodes) - 1)
        estimates.append(float(simpson(values[picked], x=nodes[picked])))
        if len(estimates) > 1 and abs(estimates[-1] - estimates[-2]) < tol:
            return estimates[-1]
    raise ResolutionError(
        estimates[-1],
        f"Simpson levels differ by {abs(estimates[-1] - estimates[-2]):.3e} "
        f"on {sub}; refine the probe grid",
    )


def total_mass(probe: MeasureProbe, tol: float = MASS_TOL) -> float:
    return interval_mass(probe, (float(probe.grid[0]), float(probe.grid[-1])), tol)


class Verdict(Enum):
    CONVERGING = "converging"
    DIVERGING_UP = "diverging(+inf)"
    DIVERGING_DOWN = "diverging(-inf)"
    INCONCLUSIVE = "inconclusive"

    @property
    def diverging(self) -> bool:
        return self in (Verdict.DIVERGING_UP, Verdict.DIVERGING_DOWN)


@final
@dataclass(frozen=True)
class ConvergenceReport:
    interval: Tuple[float, float]
    checkpoints: Tuple[int, ...]
    steps: int
    sup_tail_osc: Tuple[float, ...]
    lipschitz_margin: Tuple[float, ...]
    log_r_range: Tuple[float, float]
    threshold: float
    verdict: Verdict

    def to_json(self) -> Dict[str, Any]:
        return {
            "interval": list(self.interval),
            "N_checkpoints": list(self.checkpoints),
            "steps": self.steps,
            "sup_tail_osc": list(self.sup_tail_osc),
            "lipschitz_margin": list(self.lipschitz_margin),
            "log_r_range": list(self.log_r_range),
            "threshold": self.threshold,
            "verdict": self.verdict.value,
        }


def interval_distance(interval: Tuple[float, float], phase: float) -> float:
    """Circular distance from a phase to the arc [lo, hi]."""
    lo, hi = interval
    if hi - lo >= 2 * math.pi or canonical(phase - lo) <= hi - lo:
        return 0.0
    return min(circular_distance(phase, lo), circular_distance(phase, hi))


def _exceptional_etas(
    exceptional: Union[ExceptionalSet, Iterable[float], None]
) -> Tuple[float, ...]:
    if exceptional is None:
        return ()
    if isinstance(exceptional, ExceptionalSet):
        return exceptional.etas
    return tuple(float(eta) for eta in exceptional)


def tail_oscillation(log_r: np.ndarray, checkpoints: Sequence[int]) -> List[float]:
    """max over the grid of (max - min) of log r_n over checkpoint <= n <= N."""
    suffix_max = np.maximum.accumulate(log_r[:, ::-1], axis=1)[:, ::-1]
    suffix_min = np.minimum.accumulate(log_r[:, ::-1], axis=1)[:, ::-1]
    spread = suffix_max - suffix_min
    return [float(spread[:, m].max()) for m in checkpoints]


def _verdict(
    log_r: np.ndarray,
    checkpoints: Sequence[int],
    oscillation: Sequence[float],
    margins: Sequence[float],
    steps: int,
    threshold: float,
) -> Verdict:
    informative = [i for i, m in enumerate(checkpoints) if m < steps]
    if informative:
        last = informative[-1]
        settled = oscillation[last] + margins[last] < threshold
        shrinking = len(informative) < 2 or (
            oscillation[last] <= oscillation[informative[-2]]
        )
        if settled and shrinking:
            return Verdict.CONVERGING
    values = log_r[:, list(checkpoints)]
    if len(checkpoints) >= 2:
        smallest = np.abs(values).min(axis=0)
        growing = bool(np.all(np.diff(smallest) > 0))
        if growing and np.all(values > 0):
            return Verdict.DIVERGING_UP
        if growing and np.all(values < 0):
            return Verdict.DIVERGING_DOWN
    return Verdict.INCONCLUSIVE


def convergence_diagnostic(
    coeffs: Coefficients,
    interval: Tuple[float, float],
    grid_points: int,
    checkpoints: Sequence[int],
    steps: Optional[int] = None,
    exceptional: Union[ExceptionalSet, Iterable[float], None] = None,
    threshold: float = CONVERGENCE_THRESHOLD,
    mapper: Optional[Mapper] = None,
    chunks: int = 1,
) -> ConvergenceReport:
    """Tail oscillation of log r_n on a uniform grid over the interval.

    The sup over the grid is only a proxy for the sup over the interval; the
    Lipschitz margin (largest change of log r_N - log r_m between neighbouring
    grid points) is added before comparing with the threshold.
    """
    lo, hi = map(float, interval)
    checkpoints = tuple(sorted(set(int(m) for m in checkpoints)))
    if not checkpoints or checkpoints[0] < 0:
        raise ParameterError(f"Checkpoints must be non-negative: {checkpoints}")
    if grid_points < 2 or not lo < hi:
        raise ParameterError(
            f"Need a non-empty interval and 2+ grid points, got {interval}"
        )
    steps = checkpoints[-1] if steps is None else steps
    if steps < checkpoints[-1]:
        raise ParameterError(f"Steps {steps} end before checkpoint {checkpoints[-1]}")
    for eta in _exceptional_etas(exceptional):
        if interval_distance((lo, hi), eta) <= 0:
            raise ParameterError(
                f"Interval [{lo}, {hi}] touches the exceptional phase {eta!r}"
            )
    grid = np.linspace(lo, hi, grid_points)
    log_r = trajectory_grid(coeffs, grid, steps, mapper=mapper, chunks=chunks).log_r
    oscillation = tail_oscillation(log_r, checkpoints)
    margins = [
        float(np.abs(np.diff(log_r[:, steps] - log_r[:, m])).max())
        for m in checkpoints
    ]
    verdict = _verdict(log_r, checkpoints, oscillation, margins, steps, threshold)
    final = log_r[:, steps]
    logger.info(
        "Convergence on [%.4f, %.4f] up to N=%d: %s", lo, hi, steps, verdict.value
    )
    return ConvergenceReport(
        (lo, hi),
        checkpoints,
        steps,
        tuple(oscillation),
        tuple(margins),
        (float(final.min()), float(final.max())),
        threshold,
        verdict,
    )


@final
@dataclass(frozen=True)
class ResonancePoint:
    eta: float
    slope: float
    ci: float
    is_candidate: bool
    candidate: float


@final
@dataclass(frozen=True)
class ResonanceReport:
    points: Tuple[ResonancePoint, ...]
    skipped: Tuple[Tuple[float, str], ...]
    steps: int
    resonant_slope: float
    control_slope: float

    @property
    def candidates(self) -> List[ResonancePoint]:
        return [point for point in self.points if point.is_candidate]

    @property
    def controls(self) -> List[ResonancePoint]:
        return [point for point in self.points if not point.is_candidate]

    @property
    def controls_flat(self) -> bool:
        """No control point drifts, which is what the absence of a.c. gaps predicts."""
        return all(abs(point.slope) < self.control_slope for point in self.controls)

    @property
    def drifting(self) -> List[ResonancePoint]:
        return [p for p in self.candidates if abs(p.slope) > self.resonant_slope]

    def to_rows(self) -> Iterator[Tuple[float, float, float, int]]:
        for point in self.points:
            yield point.eta, point.slope, point.ci, int(point.is_candidate)

    def to_json(self) -> Dict[str, Any]:
        return {
            "steps": self.steps,
            "points": [
                {
                    "eta": p.eta,
                    "slope": p.slope,
                    "ci": p.ci,
                    "is_candidate": p.is_candidate,
                    "candidate": p.candidate,
                }
                for p in self.points
            ],
            "skipped": [{"eta": eta, "note": note} for eta, note in self.skipped],
            "controls_flat": self.controls_flat,
            "drifting": [p.eta for p in self.drifting],
        }


def power_law_slope(n: np.ndarray, log_r: np.ndarray) -> Tuple[float, float]:
    """Least-squares slope of log r_n against log n, and its 95% half width."""
    fit = linregress(np.log(n), log_r)
    return float(fit.slope), float(1.96 * fit.stderr)


def resonance_scan(
    coeffs: Coefficients,
    candidates: Union[ExceptionalSet, Iterable[float]],
    control_offsets: Sequence[float],
    steps: int,
    resonant_slope: float = RESONANT_SLOPE,
    control_slope: float = CONTROL_SLOPE,
    mapper: Optional[Mapper] = None,
    chunks: int = 1,
) -> ResonanceReport:
    """Fits log r_n ~ slope log n over [N/10, N] at candidates and controls."""
    if steps < MIN_SCAN_STEPS:
        raise ParameterError(f"Resonance scans need N >= {MIN_SCAN_STEPS}, got {steps}")
    planned: List[Tuple[float, bool, float]] = []
    skipped: List[Tuple[float, str]] = []
    for candidate in _exceptional_etas(candidates):
        for eta, is_candidate in [(candidate, True)] + [
            (candidate + offset, False) for offset in control_offsets
        ]:
            try:
                if coeffs.model is ModelTag.OPRL:
                    check_regular(eta)
            except SingularityError as exc:
                logger.warning("Skipping eta=%r: %s", eta, exc)
                skipped.append((eta, str(exc)))
                continue
            planned.append((eta, is_candidate, candidate))
    points: List[ResonancePoint] = []
    if planned:
        grid = np.array([eta for eta, _, _ in planned])
        stride = max(1, steps // FIT_SAMPLES)
        trajectory = trajectory_grid(coeffs, grid, steps, stride, mapper, chunks)
        fitted = trajectory.n >= max(1, int(FIT_FRACTION * steps))
        n = trajectory.n[fitted]
        for (eta, is_candidate, candidate), row in zip(planned, trajectory.log_r):
            slope, ci = power_law_slope(n, row[fitted])
            points.append(ResonancePoint(eta, slope, ci, is_candidate, candidate))
    report = ResonanceReport(
        tuple(points), tuple(skipped), steps, resonant_slope, control_slope
    )
    logger.info(
        "Scanned %d points (%d skipped): %d drifting candidates, controls flat: %s",
        len(points),
        len(skipped),
        len(report.drifting),
        report.controls_flat,
    )
    return report
