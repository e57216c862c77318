"""Discrete-event core.

Time is an integer count of microseconds since the start of the run, so that
latency components add up exactly. Events with equal timestamps fire in the
order they were scheduled.
"""

from dataclasses import dataclass, field
from enum import Enum
import heapq
from typing import Any, Callable, Dict, List, Optional, Tuple

from loguru import logger

from ..errors import InvariantViolation

SimTime = int

US_PER_MS = 1_000
US_PER_S = 1_000_000


class EventKind(Enum):
    """Kinds of events processed by a cell run."""
    PACKET_ARRIVAL = "packet_arrival"
    UL_GRANT_READY = "ul_grant_ready"
    UL_TX_DONE = "ul_tx_done"
    GNB_PROC_DONE = "gnb_proc_done"
    CORE_PATH_DONE = "core_path_done"
    DL_SLOT_BOUNDARY = "dl_slot_boundary"
    PTM_TX_DONE = "ptm_tx_done"
    NAK_REPORT = "nak_report"
    REPAIR_TX_DONE = "repair_tx_done"
    MOBILITY_CHANGE = "mobility_change"
    POLICY_CHANGE = "policy_change"
    SCENARIO_END = "scenario_end"


@dataclass(order=True)
class Event:
    fire_at: SimTime
    seq: int
    kind: EventKind = field(compare=False)
    payload: Any = field(default=None, compare=False)


def next_slot_boundary(t: SimTime, slot_len: int) -> SimTime:
    """Smallest multiple of slot_len that is >= t."""
    if slot_len <= 0:
        raise ValueError(f"slot_len must be positive, got {slot_len}")
    return -(-t // slot_len) * slot_len


Handler = Callable[[Event], None]


class Simulator:
    """Virtual clock plus a time-ordered event heap with FIFO tie-breaking."""

    def __init__(self, record_trace: bool = False):
        self.now: SimTime = 0
        self.processed_count = 0
        self.record_trace = record_trace
        self.trace: List[Tuple[SimTime, int, EventKind]] = []
        self._queue: List[Event] = []
        self._seq = 0
        self._handlers: Dict[EventKind, Handler] = {}

    def on(self, kind: EventKind, handler: Handler):
        self._handlers[kind] = handler

    def schedule(self, fire_at: SimTime, kind: EventKind, payload: Any = None) -> Event:
        if fire_at < self.now:
            raise InvariantViolation(
                f"Cannot schedule {kind.value} at {fire_at} us: clock is already at {self.now} us"
            )
        event = Event(fire_at=int(fire_at), seq=self._seq, kind=kind, payload=payload)
        self._seq += 1
        heapq.heappush(self._queue, event)
        return event

    def __len__(self) -> int:
        return len(self._queue)

    def peek_time(self) -> Optional[SimTime]:
        return self._queue[0].fire_at if self._queue else None

    def _dispatch(self, event: Event):
        handler = self._handlers.get(event.kind)
        if handler is None:
            raise InvariantViolation(f"No handler registered for {event.kind.value}")
        self.now = event.fire_at
        if self.record_trace:
            self.trace.append((event.fire_at, event.seq, event.kind))
        handler(event)
        self.processed_count += 1

    def run_until(self, end: SimTime):
        """Process every event with fire_at <= end, then park the clock at end."""
        while self._queue and self._queue[0].fire_at <= end:
            self._dispatch(heapq.heappop(self._queue))
        if end > self.now:
            self.now = end

    def run(self):
        """Process events until the queue is empty."""
        while self._queue:
            self._dispatch(heapq.heappop(self._queue))
        logger.debug(f"Event queue drained at {self.now} us after {self.processed_count} events")
