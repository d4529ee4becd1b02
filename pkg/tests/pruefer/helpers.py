from __future__ import annotations

import numpy as np

from gbvlab.pruefer import JacobiCoeffs, VerblunskyCoeffs
from gbvlab.sequences import CoeffSequence


def random_verblunsky(steps: int, seed: int = 0) -> VerblunskyCoeffs:
    """Decaying coefficients of modulus at most 0.5, well inside the disk."""
    rng = np.random.default_rng(seed)
    n = np.arange(steps)
    radius = 0.5 * rng.uniform(0, 1, steps) / (n + 1) ** 0.6
    values = radius * np.exp(1j * rng.uniform(0, 2 * np.pi, steps))
    return VerblunskyCoeffs(CoeffSequence.from_values(values))


def random_jacobi(steps: int, seed: int = 0) -> JacobiCoeffs:
    """Jacobi parameters close to the free ones, a_n in (0.8, 1.2)."""
    rng = np.random.default_rng(seed)
    n = np.arange(steps + 2)
    a_minus_one = 0.2 * rng.uniform(-1, 1, steps + 2) / (n + 1) ** 0.6
    b = 0.4 * rng.uniform(-1, 1, steps + 2) / (n + 1) ** 0.6
    return JacobiCoeffs.from_perturbations(
        CoeffSequence.from_values(a_minus_one), CoeffSequence.from_values(b)
    )


def phase_gap(first: np.ndarray, second: np.ndarray) -> float:
    """Largest distance between two angle arrays, modulo 2π."""
    difference = np.angle(np.exp(1j * (np.asarray(first) - np.asarray(second))))
    return float(np.abs(difference).max())
