from __future__ import annotations

from enum import Enum

from .errors import ParameterError


class ModelTag(Enum):
    """Which recursion the unified Pruefer step runs: c = 0 (OPUC), c = 1 (OPRL)."""

    OPUC = 0
    OPRL = 1

    @property
    def c(self) -> int:
        return self.value

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> ModelTag:
        try:
            return cls[label.upper()]
        except KeyError:
            raise ParameterError(f"Unknown model {label!r}") from None
