"""The unified Pruefer step and its vectorised evolution over an eta grid.

With omega_n = (n + 1) eta + 2 theta_n and c = 0 (OPUC) or c = 1 (OPRL),

    r_{n+1}/r_n e^{i(theta_{n+1} - theta_n)}
        = (1 - c alpha_n - conj(alpha_n) e^{-i omega_n}) / sqrt(radicand),
    radicand = |1 - c alpha_n|^2 - |alpha_n|^2.

Radii are tracked as log r only; theta is unwrapped with increments in (-π, π].
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Optional, Tuple, final

import numpy as np

from ..errors import DegenerateStepError, ParameterError, StepDomainError
from ..events.base import Topic
from ..models import ModelTag
from ..pool import chunked, resolve_mapper
from ..typing import Coefficients, Mapper

if TYPE_CHECKING:
    from ..events import Bus

logger = logging.getLogger(__name__)


@final
@dataclass(frozen=True)
class PruferState:
    n: int = 0
    log_r: float = 0.0
    theta: float = 0.0

    @property
    def r(self) -> float:
        return float(np.exp(self.log_r))


def step_terms(
    alpha: complex, eta: float, n: int, theta: float, c: int
) -> Tuple[complex, float]:
    """Returns the step numerator and the radicand under the square root."""
    omega = (n + 1) * eta + 2 * theta
    numerator = 1 - c * alpha - np.conj(alpha) * np.exp(-1j * omega)
    radicand = abs(1 - c * alpha) ** 2 - abs(alpha) ** 2
    return complex(numerator), float(radicand)


def unified_ratio(alpha: complex, eta: float, n: int, theta: float, c: int) -> complex:
    """r_{n+1}/r_n e^{i(theta_{n+1} - theta_n)} in its unified form."""
    numerator, radicand = step_terms(alpha, eta, n, theta, c)
    return numerator / np.sqrt(radicand)


def modulus_ratio(alpha: complex, eta: float, n: int, theta: float, c: int) -> float:
    """r_{n+1}/r_n from the modulus of 1 - alpha e^{i omega} - c conj(alpha)."""
    omega = (n + 1) * eta + 2 * theta
    radicand = (1 - c * alpha) * (1 - c * np.conj(alpha)) - alpha * np.conj(alpha)
    top = abs(1 - alpha * np.exp(1j * omega) - c * np.conj(alpha))
    return float(top / np.sqrt(radicand.real))


def phase_ratio(alpha: complex, eta: float, n: int, theta: float, c: int) -> complex:
    """e^{2i(theta_{n+1} - theta_n)} as a ratio of conjugate expressions."""
    omega = (n + 1) * eta + 2 * theta
    top = 1 - np.conj(alpha) * np.exp(-1j * omega) - c * alpha
    bottom = 1 - alpha * np.exp(1j * omega) - c * np.conj(alpha)
    return complex(top / bottom)


def unified_prufer_step(
    state: PruferState, alpha_n: complex, eta: float, model: ModelTag
) -> PruferState:
    numerator, radicand = step_terms(alpha_n, eta, state.n, state.theta, model.c)
    if radicand <= 0:
        raise StepDomainError(state.n, alpha_n)
    if numerator == 0:
        raise DegenerateStepError(state.n, alpha_n)
    return PruferState(
        n=state.n + 1,
        log_r=state.log_r + float(np.log(abs(numerator)) - 0.5 * np.log(radicand)),
        theta=state.theta + float(np.angle(numerator)),
    )


@final
@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded Pruefer states on an eta grid; arrays are indexed [grid, record]."""

    eta: np.ndarray
    n: np.ndarray
    log_r: np.ndarray
    theta: np.ndarray

    def states(self, index: int = 0) -> List[PruferState]:
        return [
            PruferState(int(n), float(log_r), float(theta))
            for n, log_r, theta in zip(self.n, self.log_r[index], self.theta[index])
        ]

    @property
    def final_log_r(self) -> np.ndarray:
        return self.log_r[:, -1]

    @property
    def final_theta(self) -> np.ndarray:
        return self.theta[:, -1]


def record_indices(steps: int, stride: int) -> np.ndarray:
    """0, stride, 2 stride, ... and always the final index `steps`."""
    if stride < 1:
        raise ParameterError(f"Recording stride must be positive, got {stride}")
    indices = np.arange(0, steps + 1, stride)
    if indices[-1] != steps:
        indices = np.append(indices, steps)
    return indices


def evolve_arrays(
    first: np.ndarray,
    second: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
    eta: np.ndarray,
    c: int,
    stride: int = 1,
) -> Tuple[np.ndarray, np.ndarray]:
    """Runs the unified recursion with alpha_n = first[n] u(eta) + second[n] v(eta).

    Returns (log_r, theta), each of shape (len(eta), number of recorded steps).
    """
    steps = len(first)
    recorded = record_indices(steps, stride)
    log_r = np.zeros(len(eta))
    theta = np.zeros(len(eta))
    log_r_out = np.zeros((len(eta), len(recorded)))
    theta_out = np.zeros((len(eta), len(recorded)))
    slot = 1
    for n in range(steps):
        alpha = first[n] * u + second[n] * v
        omega = (n + 1) * eta + 2 * theta
        numerator = 1 - c * alpha - np.conj(alpha) * np.exp(-1j * omega)
        radicand = np.abs(1 - c * alpha) ** 2 - np.abs(alpha) ** 2
        if np.any(radicand <= 0):
            bad = int(np.argmax(radicand <= 0))
            raise StepDomainError(n, complex(alpha[bad]))
        if np.any(numerator == 0):
            bad = int(np.argmax(numerator == 0))
            raise DegenerateStepError(n, complex(alpha[bad]))
        log_r += np.log(np.abs(numerator)) - 0.5 * np.log(radicand)
        theta += np.angle(numerator)
        if slot < len(recorded) and recorded[slot] == n + 1:
            log_r_out[:, slot] = log_r
            theta_out[:, slot] = theta
            slot += 1
    return log_r_out, theta_out


def _evolve_chunk(
    args: Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, int, int]
) -> Tuple[np.ndarray, np.ndarray]:
    """Multiprocess worker function running one contiguous slice of the grid."""
    return evolve_arrays(*args)


def trajectory_grid(
    coeffs: Coefficients,
    eta: np.ndarray,
    steps: int,
    stride: int = 1,
    mapper: Optional[Mapper] = None,
    chunks: int = 1,
) -> Trajectory:
    """Evolves independent trajectories for every eta of the grid."""
    if steps < 0:
        raise ParameterError(f"Step count must not be negative, got {steps}")
    eta = np.atleast_1d(np.asarray(eta, dtype=np.float64))
    first, second = coeffs.linear_form(steps)
    u, v = coeffs.weights(eta)
    c = coeffs.model.c
    slices = chunked(list(range(len(eta))), chunks)
    work = [
        (first, second, u[part], v[part], eta[part], c, stride) for part in slices
    ]
    logger.debug(
        "Evolving %d steps on %d grid points in %d chunks", steps, len(eta), len(work)
    )
    results = resolve_mapper(mapper)(_evolve_chunk, work)
    log_r = np.concatenate([log_r for log_r, _ in results], axis=0)
    theta = np.concatenate([theta for _, theta in results], axis=0)
    return Trajectory(eta, record_indices(steps, stride), log_r, theta)


def prufer_trajectory(
    coeffs: Coefficients,
    eta: float,
    steps: int,
    stride: int = 1,
    event_bus: Optional[Bus] = None,
) -> List[PruferState]:
    """States n = 0 .. steps at the given eta (every `stride`-th plus the last)."""
    states = trajectory_grid(coeffs, np.array([eta]), steps, stride).states(0)
    if event_bus is not None:
        event_bus.publish(Topic.START, eta, states[:1])
        for state in states[1:-1]:
            event_bus.publish(Topic.STEP, eta, (state,))
        event_bus.publish(Topic.DONE, eta, states[-1:])
    return states
