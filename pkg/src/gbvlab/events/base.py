"""Progress events of a Pruefer evolution.

A trajectory publishes one START event carrying its initial state, one STEP
event per recorded intermediate state and one DONE event with the final state.
Handlers subscribe to a single topic or to the enclosing `trajectory` scope.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Callable, Dict, List, Sequence, Tuple, Union

from ..errors import ParameterError

if TYPE_CHECKING:
    from ..pruefer.step import PruferState

SCOPE = "trajectory"


class Topic(Enum):
    START = "trajectory.start"
    STEP = "trajectory.step"
    DONE = "trajectory.done"

    @property
    def scopes(self) -> Tuple[str, str]:
        """Subscription keys reached by this topic, most specific first."""
        return self.value, SCOPE


@dataclass(frozen=True)
class Event:
    topic: Topic
    eta: float
    states: Sequence[PruferState]

    @property
    def last(self) -> PruferState:
        return self.states[-1]


EventHandler = Callable[[Event], None]


def _scope_key(scope: Union[Topic, str]) -> str:
    if isinstance(scope, Topic):
        return scope.value
    if scope != SCOPE and scope not in {topic.value for topic in Topic}:
        raise ParameterError(f"Unknown event scope {scope!r}")
    return scope


class Bus:
    """Delivers trajectory events to handlers in subscription order."""

    def __init__(self) -> None:
        self.subscribers: Dict[str, List[EventHandler]] = {}

    def publish(self, topic: Topic, eta: float, states: Sequence[PruferState]) -> Event:
        event = Event(topic=topic, eta=eta, states=tuple(states))
        for key in topic.scopes:
            for handler in self.subscribers.get(key, ()):
                handler(event)
        return event

    def subscribe(self, scope: Union[Topic, str], handler: EventHandler) -> None:
        handlers = self.subscribers.setdefault(_scope_key(scope), [])
        if handler not in handlers:
            handlers.append(handler)

    def unsubscribe(self, handler: EventHandler) -> None:
        for handlers in self.subscribers.values():
            if handler in handlers:
                handlers.remove(handler)
