from __future__ import annotations

from typing import (
    TYPE_CHECKING,
    Callable,
    Iterable,
    List,
    Protocol,
    Tuple,
    TypeVar,
    runtime_checkable,
)

import numpy as np

if TYPE_CHECKING:
    from .models import ModelTag

T = TypeVar("T")
R = TypeVar("R")

IndexEvaluator = Callable[[np.ndarray], np.ndarray]


@runtime_checkable
class Mapper(Protocol):
    """Order-preserving map capability handed out by the worker pool."""

    def __call__(self, func: Callable[[T], R], items: Iterable[T]) -> List[R]:
        ...


@runtime_checkable
class Coefficients(Protocol):
    """Recursion coefficients reduced to the linear form alpha_n = x_n u + y_n v.

    The weights (u, v) depend only on the spectral parameter; the sequences
    (x_n, y_n) only on the step index.
    """

    @property
    def model(self) -> ModelTag:
        ...

    def linear_form(self, steps: int) -> Tuple[np.ndarray, np.ndarray]:
        ...

    def weights(self, eta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        ...
