"""JSON experiment configurations.

Every field is validated before any work starts; unknown keys anywhere raise
SchemaError.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Tuple, Union, final

from .errors import ParameterError, SchemaError
from .models import ModelTag
from .phases import Variant
from .pruefer.coefficients import JacobiCoeffs, VerblunskyCoeffs
from .sequences.base import GBVDecomposition
from .sequences.builders import sequence_from_spec


class Task(Enum):
    PHASE_SETS = "phase-sets"
    PRUFER_RUN = "prufer-run"
    DENSITY = "density"
    CONVERGENCE = "convergence"
    RESONANCE = "resonance"
    VERIFY_IDENTITIES = "verify-identities"

    @property
    def needs_coefficients(self) -> bool:
        return self not in (Task.PHASE_SETS, Task.VERIFY_IDENTITIES)


Check = Callable[[str, Any], Any]


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def number(key: str, value: Any) -> float:
    if not _is_number(value):
        raise SchemaError(f"Field {key!r} must be a number, got {value!r}")
    return float(value)


def integer(key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"Field {key!r} must be an integer, got {value!r}")
    return value


def positive(key: str, value: Any) -> int:
    value = integer(key, value)
    if value < 1:
        raise SchemaError(f"Field {key!r} must be positive, got {value!r}")
    return value


def non_negative(key: str, value: Any) -> int:
    value = integer(key, value)
    if value < 0:
        raise SchemaError(f"Field {key!r} must not be negative, got {value!r}")
    return value


def boolean(key: str, value: Any) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(f"Field {key!r} must be true or false, got {value!r}")
    return value


def numbers(key: str, value: Any) -> Tuple[float, ...]:
    if not isinstance(value, list):
        raise SchemaError(f"Field {key!r} must be a list of numbers, got {value!r}")
    return tuple(number(key, item) for item in value)


def integers(key: str, value: Any) -> Tuple[int, ...]:
    if not isinstance(value, list):
        raise SchemaError(f"Field {key!r} must be a list of integers, got {value!r}")
    return tuple(non_negative(key, item) for item in value)


def pair(key: str, value: Any) -> Tuple[float, float]:
    values = numbers(key, value)
    if len(values) != 2:
        raise SchemaError(f"Field {key!r} must hold exactly two numbers")
    return values[0], values[1]


def pairs(key: str, value: Any) -> Tuple[Tuple[float, float], ...]:
    if not isinstance(value, list):
        raise SchemaError(f"Field {key!r} must be a list of [lo, hi] pairs")
    return tuple(pair(key, item) for item in value)


def grid(key: str, value: Any) -> Tuple[float, ...]:
    """A list of etas, or {"start", "stop", "points"} for a uniform grid."""
    if isinstance(value, list):
        return numbers(key, value)
    if not isinstance(value, Mapping) or set(value) != {"start", "stop", "points"}:
        raise SchemaError(
            f"Field {key!r} must be a list or an object with start, stop and points"
        )
    start, stop = number("start", value["start"]), number("stop", value["stop"])
    points = integer("points", value["points"])
    if points < 2:
        raise SchemaError(f"Field {key!r} needs at least two points")
    step = (stop - start) / (points - 1)
    return tuple(start + index * step for index in range(points))


def names(key: str, value: Any) -> Tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise SchemaError(f"Field {key!r} must be a list of strings")
    return tuple(value)


def mapping(key: str, value: Any) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise SchemaError(f"Field {key!r} must be an object")
    return dict(value)


TASK_FIELDS: Dict[Task, Dict[str, Check]] = {
    Task.PHASE_SETS: {"drop": numbers},
    Task.PRUFER_RUN: {"etas": numbers, "steps": non_negative, "stride": positive},
    Task.DENSITY: {"n": non_negative, "grid": grid, "intervals": pairs},
    Task.CONVERGENCE: {
        "interval": pair,
        "grid_points": positive,
        "checkpoints": integers,
        "steps": non_negative,
        "threshold": number,
        "exclude_exceptional": boolean,
    },
    Task.RESONANCE: {
        "steps": non_negative,
        "control_offsets": numbers,
        "candidates": numbers,
        "resonant_slope": number,
        "control_slope": number,
    },
    Task.VERIFY_IDENTITIES: {"identities": names, "overrides": mapping},
}
REQUIRED_FIELDS: Dict[Task, Tuple[str, ...]] = {
    Task.PRUFER_RUN: ("etas", "steps"),
    Task.DENSITY: ("n", "grid"),
    Task.CONVERGENCE: ("interval", "checkpoints"),
    Task.RESONANCE: ("steps",),
}
TOP_LEVEL_FIELDS = {
    "task",
    "model",
    "coefficients",
    "a_minus_one",
    "p",
    "phases",
    "variant",
    "seed",
    "params",
}


@final
@dataclass(frozen=True)
class ExperimentConfig:
    task: Task
    model: ModelTag
    coefficients: Optional[Mapping[str, Any]] = None
    a_minus_one: Optional[Mapping[str, Any]] = None
    p: Optional[int] = None
    phases: Tuple[float, ...] = ()
    variant: Optional[Variant] = None
    seed: int = 0
    params: Mapping[str, Any] = field(default_factory=dict)
    source: Mapping[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def from_mapping(
        cls, data: Any, task: Optional[Union[Task, str]] = None
    ) -> ExperimentConfig:
        """Validates a decoded JSON document; `task` is the CLI subcommand."""
        if not isinstance(data, Mapping) or not data:
            raise SchemaError("Experiment configuration must be a non-empty object")
        unknown = set(data) - TOP_LEVEL_FIELDS
        if unknown:
            raise SchemaError(f"Unknown configuration fields: {sorted(unknown)}")
        chosen = _task(data.get("task"), task)
        model = _model(data.get("model", "opuc"))
        params = _params(chosen, data.get("params", {}))
        variant = None
        if "variant" in data:
            try:
                variant = Variant(data["variant"])
            except ValueError:
                raise SchemaError(f"Unknown variant {data['variant']!r}") from None
            if variant.model is not model:
                raise SchemaError(f"Variant {variant.value} does not apply to {model}")
        config = cls(
            task=chosen,
            model=model,
            coefficients=_optional_mapping(data, "coefficients"),
            a_minus_one=_optional_mapping(data, "a_minus_one"),
            p=integer("p", data["p"]) if "p" in data else None,
            phases=numbers("phases", data.get("phases", [])),
            variant=variant,
            seed=integer("seed", data.get("seed", 0)),
            params=params,
            source=dict(data),
        )
        config.validate()
        return config

    def validate(self) -> None:
        if self.task is Task.PHASE_SETS and self.p is None:
            raise SchemaError("Task phase-sets needs the field 'p'")
        if self.task.needs_coefficients:
            if self.coefficients is None:
                raise SchemaError(f"Task {self.task.value} needs 'coefficients'")
            self.decomposition()
        if self.a_minus_one is not None and self.model is not ModelTag.OPRL:
            raise SchemaError("Field 'a_minus_one' only applies to the oprl model")
        if self.seed < 0:
            raise SchemaError(f"Seed must be non-negative, got {self.seed}")

    def decomposition(self) -> GBVDecomposition:
        return sequence_from_spec(self.coefficients or {"type": "zero"})

    def coeffs(self) -> Union[VerblunskyCoeffs, JacobiCoeffs]:
        """Verblunsky coefficients (OPUC) or the Jacobi parameters b_n = V_n."""
        sequence = self.decomposition().sequence
        if self.model is ModelTag.OPUC:
            return VerblunskyCoeffs(sequence)
        if self.a_minus_one is None:
            return JacobiCoeffs.schroedinger(sequence)
        a_minus_one = sequence_from_spec(self.a_minus_one).sequence
        return JacobiCoeffs.from_perturbations(a_minus_one, sequence)

    def effective_variant(self) -> Variant:
        return self.variant or Variant.default_for(self.model)

    def effective_phases(self) -> Tuple[float, ...]:
        """The configured phases, or the phases of the coefficient decomposition."""
        if self.phases or self.coefficients is None:
            return self.phases
        return self.decomposition().phases

    @property
    def digest(self) -> str:
        canonical = json.dumps(self.source, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def with_seed(self, seed: Optional[int]) -> ExperimentConfig:
        if seed is None:
            return self
        return ExperimentConfig.from_mapping({**self.source, "seed": seed}, self.task)


def _task(declared: Any, requested: Optional[Union[Task, str]]) -> Task:
    try:
        chosen = Task(requested) if requested is not None else Task(declared)
    except ValueError:
        raise SchemaError(f"Unknown task {declared or requested!r}") from None
    if declared is not None and requested is not None and chosen.value != declared:
        raise SchemaError(
            f"Configuration declares task {declared!r}, "
            f"but {Task(requested).value!r} was requested"
        )
    return chosen


def _model(label: Any) -> ModelTag:
    if not isinstance(label, str):
        raise SchemaError(f"Field 'model' must be a string, got {label!r}")
    try:
        return ModelTag.from_label(label)
    except ParameterError as exc:
        raise SchemaError(str(exc)) from None


def _optional_mapping(data: Mapping[str, Any], key: str) -> Optional[Mapping[str, Any]]:
    if key not in data:
        return None
    return mapping(key, data[key])


def _params(task: Task, raw: Any) -> Dict[str, Any]:
    raw = mapping("params", raw)
    schema = TASK_FIELDS[task]
    unknown = set(raw) - set(schema)
    if unknown:
        raise SchemaError(f"Unknown {task.value} parameters: {sorted(unknown)}")
    missing = [key for key in REQUIRED_FIELDS.get(task, ()) if key not in raw]
    if missing:
        raise SchemaError(f"Missing {task.value} parameters: {missing}")
    return {key: schema[key](key, value) for key, value in raw.items()}


def load_config(
    path: Union[str, Path], task: Optional[Union[Task, str]] = None
) -> ExperimentConfig:
    """Reads and validates an experiment file. OSError is left to the caller."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    return ExperimentConfig.from_mapping(data, task)

