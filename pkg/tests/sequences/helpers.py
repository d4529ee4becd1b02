from __future__ import annotations

import cmath
import math

import numpy as np

from gbvlab.sequences import RotatedBVComponent


def naive_rotated_variation(comp: RotatedBVComponent, start: int, stop: int) -> float:
    """Sums |e^{i phase} beta_{n+1} - beta_n| one term at a time."""
    rotation = cmath.exp(1j * comp.phase)
    return math.fsum(
        abs(rotation * comp.seq(n + 1) - comp.seq(n)) for n in range(start, stop)
    )


def relative_l2(values: np.ndarray, expected: np.ndarray) -> float:
    return float(np.linalg.norm(values - expected) / np.linalg.norm(expected))
