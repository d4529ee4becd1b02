"""Batch front end: `gbvlab <task> --config experiment.json --out results/`."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import tempfile
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence

import numpy as np

from . import __version__
from .algebra.identities import REGISTRY, verify_identity
from .config import ExperimentConfig, Task, load_config
from .errors import GBVError, SchemaError
from .events import TrajectoryRecorder
from .models import ModelTag
from .phases import (
    ExceptionalSet,
    PhaseSet,
    critical_set_Ap,
    exceptional_S,
    refine_exceptional,
)
from .pool import default_threads, worker_pool
from .pruefer.step import prufer_trajectory
from .spectral import (
    CONTROL_SLOPE,
    CONVERGENCE_THRESHOLD,
    RESONANT_SLOPE,
    convergence_diagnostic,
    density_probe,
    interval_mass,
    oprl_sandwich,
    resonance_scan,
    total_mass,
)
from .typing import Mapper

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_SCHEMA = 2
EXIT_IO = 3
EXIT_COMPUTATION = 4


class Run:
    """Output directory bookkeeping for one task invocation."""

    def __init__(
        self, config: ExperimentConfig, out: Path, mapper: Mapper, threads: int
    ):
        self.config = config
        self.out = out
        self.mapper = mapper
        self.threads = threads
        self.artifacts: List[str] = []
        self.passed = True

    def path(self, name: str) -> Path:
        self.artifacts.append(name)
        return self.out / name

    def write_json(self, name: str, payload: Any) -> None:
        text = json.dumps(payload, indent=2, sort_keys=True)
        self.path(name).write_text(text + "\n", encoding="utf-8")
        logger.debug("Staged %s", name)

    def write_csv(
        self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]
    ) -> None:
        with open(self.path(name), "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(value) for value in row])
        logger.debug("Staged %s", name)


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _exceptional(config: ExperimentConfig) -> ExceptionalSet:
    if config.p is None:
        raise SchemaError(
            f"Task {config.task.value} needs 'p' to build the exceptional set"
        )
    phases = PhaseSet(config.effective_phases())
    return exceptional_S(phases, config.p, config.model, config.effective_variant())


def run_phase_sets(run: Run) -> None:
    config = run.config
    phases = PhaseSet(config.effective_phases())
    critical = critical_set_Ap(phases, config.p or 1, config.model)
    exceptional = _exceptional(config)
    drop = config.params.get("drop", ())
    if drop:
        exceptional = refine_exceptional(exceptional, drop)
    run.write_json(
        "phase_sets.json",
        {
            "model": config.model.label,
            "p": config.p,
            "variant": config.effective_variant().value,
            "phases": list(phases),
            "A_p": list(critical),
            "S": exceptional.to_json(),
        },
    )


def run_prufer(run: Run) -> None:
    params = run.config.params
    coeffs = run.config.coeffs()
    stride = params.get("stride", 1)
    summary = []
    for index, eta in enumerate(params["etas"]):
        recorder = TrajectoryRecorder()
        states = prufer_trajectory(
            coeffs, eta, params["steps"], stride, event_bus=recorder.bus
        )
        name = f"trajectory_{index}.csv"
        recorder.write(run.path(name))
        final = states[-1]
        summary.append(
            {
                "eta": eta,
                "csv": name,
                "n": final.n,
                "log_r": final.log_r,
                "theta": final.theta,
            }
        )
    run.write_json("prufer_run.json", {"trajectories": summary})


def run_density(run: Run) -> None:
    params = run.config.params
    probe = density_probe(
        run.config.coeffs(),
        params["n"],
        params["grid"],
        mapper=run.mapper,
        chunks=run.threads,
    )
    run.write_csv("density.csv", ("eta", "density"), probe.to_rows())
    masses = [
        {"interval": list(sub), "mass": interval_mass(probe, sub)}
        for sub in params.get("intervals", ())
    ]
    report: Dict[str, Any] = {
        "model": probe.model.label,
        "n": probe.n,
        "masses": masses,
        "total_mass": total_mass(probe),
    }
    if probe.model is ModelTag.OPRL:
        sandwich = oprl_sandwich(probe)
        report["sandwich"] = {
            "ratio_min": sandwich.ratio_min,
            "ratio_max": sandwich.ratio_max,
            "worst_margin": sandwich.worst_margin,
            "passed": sandwich.passed,
        }
        run.passed = sandwich.passed
    run.write_json("density.json", report)


def run_convergence(run: Run) -> None:
    config = run.config
    params = config.params
    exceptional = None
    if params.get("exclude_exceptional", config.p is not None):
        exceptional = _exceptional(config)
    report = convergence_diagnostic(
        config.coeffs(),
        params["interval"],
        params.get("grid_points", 50),
        params["checkpoints"],
        steps=params.get("steps"),
        exceptional=exceptional,
        threshold=params.get("threshold", CONVERGENCE_THRESHOLD),
        mapper=run.mapper,
        chunks=run.threads,
    )
    run.write_json("convergence.json", report.to_json())


def run_resonance(run: Run) -> None:
    config = run.config
    params = config.params
    candidates: Any = params.get("candidates")
    if candidates is None:
        candidates = _exceptional(config)
    report = resonance_scan(
        config.coeffs(),
        candidates,
        params.get("control_offsets", (0.5, -0.5)),
        params["steps"],
        resonant_slope=params.get("resonant_slope", RESONANT_SLOPE),
        control_slope=params.get("control_slope", CONTROL_SLOPE),
        mapper=run.mapper,
        chunks=run.threads,
    )
    header = ("eta", "slope", "ci", "is_candidate")
    run.write_csv("resonance.csv", header, report.to_rows())
    run.write_json("resonance.json", report.to_json())


def run_identities(run: Run) -> None:
    params = run.config.params
    overrides = params.get("overrides", {})
    selected = params.get("identities", tuple(REGISTRY))
    unknown = (set(overrides) | set(selected)) - set(REGISTRY)
    if unknown:
        raise SchemaError(f"Unknown identities: {sorted(unknown)}")
    reports = [
        verify_identity(name, overrides.get(name), run.config.seed) for name in selected
    ]
    run.passed = all(report.passed for report in reports)
    run.write_json(
        "identities.json",
        {
            "seed": run.config.seed,
            "passed": run.passed,
            "reports": [report.to_json() for report in reports],
        },
    )


TASKS: Dict[Task, Callable[[Run], None]] = {
    Task.PHASE_SETS: run_phase_sets,
    Task.PRUFER_RUN: run_prufer,
    Task.DENSITY: run_density,
    Task.CONVERGENCE: run_convergence,
    Task.RESONANCE: run_resonance,
    Task.VERIFY_IDENTITIES: run_identities,
}


@contextmanager
def staged_output(out: Path) -> Iterator[Path]:
    """Yields a scratch directory whose files move into `out` only on success."""
    out.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory(prefix=".gbvlab-", dir=out.parent) as scratch:
        yield Path(scratch)
        out.mkdir(exist_ok=True)
        for staged in sorted(Path(scratch).iterdir()):
            os.replace(staged, out / staged.name)
            logger.info("Wrote %s", out / staged.name)


def run(config: ExperimentConfig, out: Path, threads: Optional[int] = None) -> int:
    """Runs one validated experiment, writing its artifacts and manifest.json.

    Nothing reaches `out` unless the task completes.
    """
    threads = default_threads() if threads is None else max(1, threads)
    started = time.perf_counter()
    with staged_output(out) as scratch:
        with worker_pool(threads) as mapper:
            task_run = Run(config, scratch, mapper, threads)
            TASKS[config.task](task_run)
        _write_manifest(task_run, started)
    return EXIT_OK if task_run.passed else EXIT_CHECK_FAILED


def _write_manifest(task_run: Run, started: float) -> None:
    config = task_run.config
    task_run.write_json(
        "manifest.json",
        {
            "task": config.task.value,
            "config_sha256": config.digest,
            "version": __version__,
            "seed": config.seed,
            "threads": task_run.threads,
            "artifacts": sorted(task_run.artifacts),
            "passed": task_run.passed,
            "wall_time_s": time.perf_counter() - started,
        },
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbvlab", description="Pruefer-variable experiments for GBV coefficients."
    )
    parser.add_argument("--version", action="version", version=__version__)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")
    commands = parser.add_subparsers(dest="task", required=True)
    for task in Task:
        command = commands.add_parser(task.value)
        command.add_argument("--config", required=True, type=Path)
        command.add_argument("--out", default=Path("."), type=Path)
        command.add_argument("--seed", type=int, help="overrides the config seed")
        command.add_argument("--threads", type=int, help="worker processes")
    return parser


def _fail(exc: BaseException, code: int) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    try:
        config = load_config(args.config, args.task).with_seed(args.seed)
        return run(config, args.out, args.threads)
    except SchemaError as exc:
        return _fail(exc, EXIT_SCHEMA)
    except OSError as exc:
        return _fail(exc, EXIT_IO)
    except GBVError as exc:
        logger.debug("Run failed", exc_info=True)
        return _fail(exc, EXIT_COMPUTATION)
