"""Future event list for the campaign simulator."""
import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class EventKind(str, Enum):
    DELIVERY = "message-delivery"
    ARRIVAL = "arrival-at-point"
    MEASURED = "measurement-complete"
    POSITION_TIMER = "position-timer"


@dataclass(frozen=True, order=True, slots=True)
class SimEvent:
    """Ordered by time, then by scheduling order, so equal times run first-come first-served."""
    time: float
    seq: int
    kind: EventKind = field(compare=False)
    node: Optional[int] = field(default=None, compare=False)  # sensor id; None = central
    payload: Any = field(default=None, compare=False)


class FutureEventList:
    def __init__(self):
        self._queue: list[SimEvent] = []
        self._seq = 0
        self.clock = 0.0
        self.log: list[tuple[float, EventKind]] = []

    def __len__(self) -> int:
        return len(self._queue)

    def schedule(self, delay: float, kind: EventKind, node: Optional[int] = None, payload: Any = None) -> SimEvent:
        if delay < 0:
            raise ValueError(f"cannot schedule {kind.value} {delay} s in the past")
        event = SimEvent(self.clock + delay, self._seq, kind, node, payload)
        self._seq += 1
        heapq.heappush(self._queue, event)
        return event

    def trigger(self) -> SimEvent:
        """Pop the earliest event and advance the clock to it."""
        event = heapq.heappop(self._queue)
        if event.time < self.clock:
            raise RuntimeError(f"event at {event.time} behind clock {self.clock}")
        self.clock = event.time
        self.log.append((event.time, event.kind))
        return event
