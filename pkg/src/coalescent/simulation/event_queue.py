from __future__ import annotations
from enum import Enum
import heapq
import itertools
from typing import Any, List, Optional, Tuple


class EventType(str, Enum):
    """
    Enum of all simulator events.
    """
    ARRIVAL = 'arrival'
    DEPARTURE = 'departure'
    TRANSITION_END = 'transition_end'
    IDLE_TIMER = 'idle_timer'
    MAX_DWELL = 'max_dwell'

    @property
    def priority(self) -> int:
        """
        Rank among events sharing a timestamp, lower fires first. Arrivals precede every timer.
        """
        return 0 if self is EventType.ARRIVAL else 1


class Event:
    """
    Scheduled event. Cancelled events stay in the heap and are skipped when they reach the top.
    """
    __slots__ = ('time', 'kind', 'payload', 'pending')

    def __init__(self, time: float, kind: EventType, payload: Any = None):
        self.time = time
        self.kind = kind
        self.payload = payload
        self.pending = True


class EventQueue:
    """
    Time-ordered event calendar. Ties are broken by event priority (arrivals first), then by insertion order.
    """

    def __init__(self):
        self._heap: List[Tuple[float, int, int, Event]] = []
        self._counter = itertools.count()
        self._live = 0

    def schedule(self, time: float, kind: EventType, payload: Any = None) -> Event:
        """
        Adds an event.

        :param time:    Firing time in seconds.
        :type time:     float
        :param kind:    Event kind.
        :type kind:     EventType
        :param payload: Arbitrary data handed back on pop, defaults to None
        :type payload:  Any, optional

        :return: The scheduled event (keep it to cancel it later).
        :rtype:  Event
        """
        event = Event(time, kind, payload)
        heapq.heappush(self._heap, (time, kind.priority, next(self._counter), event))
        self._live += 1
        return event

    def cancel(self, event: Optional[Event]) -> None:
        """
        Cancels a pending event. Cancelling None, a fired or an already cancelled event does nothing.
        """
        if event is not None and event.pending:
            event.pending = False
            self._live -= 1

    def peek_time(self) -> Optional[float]:
        """
        Returns the time of the next pending event, or None if there is none.
        """
        self._drop_cancelled()
        return self._heap[0][0] if self._heap else None

    def pop(self) -> Optional[Event]:
        """
        Removes and returns the next pending event, or None if the queue is empty.
        """
        self._drop_cancelled()

        if not self._heap:
            return None
        event = heapq.heappop(self._heap)[3]
        event.pending = False
        self._live -= 1
        return event

    def __len__(self) -> int:
        return self._live

    def _drop_cancelled(self) -> None:
        while self._heap and not self._heap[0][3].pending:
            heapq.heappop(self._heap)
