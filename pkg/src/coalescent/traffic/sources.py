from __future__ import annotations
from abc import ABC, abstractmethod
from typing import Optional, Sequence, Tuple

import numpy as np

from ..base.traffic_spec import TrafficKind, TrafficSpec
from .trace import TraceRecord

# Uniforms drawn per refill of a Poisson source.
_BLOCK_SIZE = 65536

# Spacing that keeps equal trace timestamps strictly ordered.
_TIE_SPACING = 1e-9

Arrival = Tuple[float, int]


class ArrivalSource(ABC):
    """
    Abstract class that acts as the base for all arrival sources. A source hands out (time, size) pairs with strictly
    increasing times, or None once it is exhausted. A source has a single consumer.
    """

    @abstractmethod
    def next_arrival(self) -> Optional[Arrival]:
        """
        Returns the next arrival.

        :return: Arrival time in seconds and frame size in bytes, or None at end of stream.
        :rtype:  Optional[Tuple[float, int]]
        """
        pass


class PoissonSource(ArrivalSource):
    """
    Poisson arrivals with fixed frame size. Gaps come from the inverse CDF -ln(1 - u) / lambda applied to seeded
    uniforms; the source never ends.
    """

    def __init__(self, arrival_rate: float, frame_size: int, seed: int):
        self._rate = arrival_rate
        self._frame_size = frame_size
        self._rng = np.random.default_rng(seed)
        self._time = 0.0
        self._block = np.empty(0)
        self._cursor = 0

    def next_arrival(self) -> Optional[Arrival]:
        if self._cursor >= len(self._block):
            self._block = (-np.log1p(-self._rng.random(_BLOCK_SIZE)) / self._rate).tolist()
            self._cursor = 0
        self._time += self._block[self._cursor]
        self._cursor += 1
        return self._time, self._frame_size


class TraceSource(ArrivalSource):
    """
    Replays trace records, scaling timestamps by rate_scale. Records that would not come strictly after their
    predecessor are moved to 1 ns after it.
    """

    def __init__(self, records: Sequence[TraceRecord], rate_scale: float = 1.0):
        self._records = records
        self._scale = rate_scale
        self._cursor = 0
        self._last: Optional[float] = None

    def next_arrival(self) -> Optional[Arrival]:
        if self._cursor >= len(self._records):
            return None
        record = self._records[self._cursor]
        self._cursor += 1
        time = record.timestamp * self._scale

        if self._last is not None and time <= self._last:
            time = self._last + _TIE_SPACING
        self._last = time
        return time, record.size


def create_source(traffic: TrafficSpec, seed: int) -> ArrivalSource:
    """
    Creates the arrival source for a traffic description.

    :param traffic: Traffic description.
    :type traffic:  TrafficSpec
    :param seed:    Random seed (ignored for traces).
    :type seed:     int

    :return: Fresh source positioned before the first arrival.
    :rtype:  ArrivalSource
    """
    if traffic.kind == TrafficKind.POISSON:
        return PoissonSource(traffic.arrival_rate, int(traffic.frame_size), seed)
    return TraceSource(traffic.trace, traffic.rate_scale)


def replay_span(records: Sequence[TraceRecord], rate_scale: float = 1.0) -> float:
    """
    Returns the time of the last arrival a TraceSource hands out for these records, tie spacing included.

    :param records:    Trace records.
    :type records:     Sequence[TraceRecord]
    :param rate_scale: Time scale applied on replay.
    :type rate_scale:  float

    :return: Last arrival time in seconds (0 for no records).
    :rtype:  float
    """
    source = TraceSource(records, rate_scale)
    last = 0.0

    while (arrival := source.next_arrival()) is not None:
        last = arrival[0]
    return last
