from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, List, Tuple, Union

from .base import SCOPE, Bus, Event, Topic

if TYPE_CHECKING:
    from ..pruefer.step import PruferState

logger = logging.getLogger(__name__)

TRAJECTORY_HEADER = ("n", "log_r", "theta")


class TrajectoryRecorder:
    """Collects published Pruefer states and writes them as `n,log_r,theta` rows."""

    def __init__(self) -> None:
        self.rows: List[Tuple[int, float, float]] = []
        self.etas: List[float] = []

    def __call__(self, event: Event) -> None:
        if event.topic is Topic.START:
            self.etas.append(event.eta)
            logger.debug("Trajectory started at eta=%r", event.eta)
        self._record(event.states)
        if event.topic is Topic.DONE:
            logger.debug(
                "Trajectory at eta=%r finished at n=%d", event.eta, event.last.n
            )

    def _record(self, states: Iterable[PruferState]) -> None:
        for state in states:
            if self.rows and self.rows[-1][0] >= state.n:
                continue
            self.rows.append((state.n, state.log_r, state.theta))

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        write_trajectory_rows(self.rows, path)
        logger.info("Wrote %d trajectory rows to %s", len(self.rows), path)
        return path

    @property
    def bus(self) -> Bus:
        """Returns a new Bus that feeds every trajectory event to this recorder."""
        bus = Bus()
        bus.subscribe(SCOPE, self)
        return bus


def write_trajectory_rows(
    rows: Iterable[Tuple[int, float, float]], path: Union[str, Path]
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER)
        for n, log_r, theta in rows:
            writer.writerow((n, repr(float(log_r)), repr(float(theta))))


def write_trajectory_csv(
    states: Iterable[PruferState], path: Union[str, Path], stride: int = 1
) -> None:
    """Writes every `stride`-th state, always keeping the final one."""
    states = list(states)
    rows = [
        (s.n, s.log_r, s.theta)
        for index, s in enumerate(states)
        if index % stride == 0 or index == len(states) - 1
    ]
    write_trajectory_rows(rows, path)
