from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
import math
from typing import Optional, Sequence, Tuple

from ..traffic.trace import TraceRecord, EmptyTraceException, measured_rate, mean_frame_size

_DEFAULT_FRAME_SIZE = 1500


class TrafficKind(str, Enum):
    """
    Enum of all supported arrival processes.
    """
    POISSON = 'poisson'
    TRACE = 'trace'


class InvalidArrivalRateException(Exception):
    def __init__(self, arrival_rate: float):
        super().__init__(f'Arrival rate must be positive (got {arrival_rate})')


class InvalidFrameSizeException(Exception):
    def __init__(self, frame_size: float):
        super().__init__(f'Frame size must be positive (got {frame_size})')


class InvalidRateScaleException(Exception):
    def __init__(self, rate_scale: float):
        super().__init__(f'Rate scale must be positive (got {rate_scale})')


class InvalidLoadException(Exception):
    def __init__(self, load: float, frame_size: float):
        super().__init__(f'Load and frame size must be positive (got load={load}, frame_size={frame_size})')


def load_to_lambda(load: float, frame_size: float) -> float:
    """
    Converts an offered load into a frame arrival rate.

    :param load:       Offered load in bits per second.
    :type load:        float
    :param frame_size: Frame size in bytes.
    :type frame_size:  float

    :raises InvalidLoadException: Raised if an input is not positive.

    :return: Arrival rate in frames per second.
    :rtype:  float
    """
    if not (load > 0) or not (frame_size > 0):
        raise InvalidLoadException(load, frame_size)
    return load / (8 * frame_size)


def lambda_to_load(arrival_rate: float, frame_size: float) -> float:
    """
    Inverse of load_to_lambda, returns the offered load in bits per second.
    """
    return arrival_rate * 8 * frame_size


@dataclass(frozen=True)
class TrafficSpec:
    """
    Describes the arrival process fed into the interface. Use the poisson, from_load and from_trace constructors
    rather than building instances by hand.
    """
    kind: TrafficKind
    arrival_rate: Optional[float] = None
    """
    Mean arrival rate in frames per second (Poisson only, lambda).
    """
    frame_size: float = _DEFAULT_FRAME_SIZE
    """
    Frame size in bytes. Poisson frames all have this size, for traces it holds the mean record size.
    """
    trace: Optional[Tuple[TraceRecord, ...]] = None
    """
    Trace records (trace only).
    """
    rate_scale: float = 1.0
    """
    Factor applied to trace timestamps on replay (trace only). Values below 1 compress the trace in time.
    """

    def __post_init__(self):
        """
        Validates the traffic description.

        :raises InvalidArrivalRateException: Raised if a Poisson rate is missing or not positive.
        :raises InvalidFrameSizeException:   Raised if the frame size is not positive.
        :raises EmptyTraceException:         Raised if a trace has no records.
        :raises InvalidRateScaleException:   Raised if the rate scale is not positive.
        """
        if self.kind == TrafficKind.POISSON:
            if self.arrival_rate is None or not (self.arrival_rate > 0) or math.isinf(self.arrival_rate):
                raise InvalidArrivalRateException(self.arrival_rate)
        elif not self.trace:
            raise EmptyTraceException()

        if not (self.frame_size > 0):
            raise InvalidFrameSizeException(self.frame_size)
        if not (self.rate_scale > 0) or math.isinf(self.rate_scale):
            raise InvalidRateScaleException(self.rate_scale)

    @staticmethod
    def poisson(arrival_rate: float, frame_size: float = _DEFAULT_FRAME_SIZE) -> TrafficSpec:
        return TrafficSpec(TrafficKind.POISSON, arrival_rate=arrival_rate, frame_size=frame_size)

    @staticmethod
    def from_load(load: float, frame_size: float = _DEFAULT_FRAME_SIZE) -> TrafficSpec:
        """
        Creates a Poisson traffic description from an offered load.

        :param load:       Offered load in bits per second.
        :type load:        float
        :param frame_size: Frame size in bytes, defaults to 1500
        :type frame_size:  float, optional

        :return: Poisson traffic description.
        :rtype:  TrafficSpec
        """
        return TrafficSpec.poisson(load_to_lambda(load, frame_size), frame_size)

    @staticmethod
    def from_trace(records: Sequence[TraceRecord], rate_scale: float = 1.0) -> TrafficSpec:
        """
        Creates a trace replay description.

        :param records:    Parsed trace records.
        :type records:     Sequence[TraceRecord]
        :param rate_scale: Factor applied to the timestamps, defaults to 1.0
        :type rate_scale:  float, optional

        :raises EmptyTraceException: Raised if there are no records.

        :return: Trace traffic description.
        :rtype:  TrafficSpec
        """
        if not records:
            raise EmptyTraceException()
        return TrafficSpec(
            TrafficKind.TRACE,
            frame_size=mean_frame_size(records),
            trace=tuple(records),
            rate_scale=rate_scale,
        )

    @property
    def mean_arrival_rate(self) -> float:
        """
        Arrival rate in frames per second; measured over the replayed span for traces.
        """
        if self.kind == TrafficKind.POISSON:
            return self.arrival_rate
        return measured_rate(self.trace, self.rate_scale)

    @property
    def offered_load(self) -> float:
        """
        Offered load in bits per second.
        """
        return lambda_to_load(self.mean_arrival_rate, self.frame_size)

    def utilization(self, line_rate: float) -> float:
        """
        Returns the utilization factor rho of a link with the given rate.

        :param line_rate: Line rate in bits per second.
        :type line_rate:  float

        :return: Offered load divided by the line rate.
        :rtype:  float
        """
        return self.offered_load / line_rate

    def as_poisson(self) -> TrafficSpec:
        """
        Returns the Poisson description with the same mean rate and frame size (the model's view of a trace).

        :raises InvalidArrivalRateException: Raised if the trace spans no time.
        """
        if self.kind == TrafficKind.POISSON:
            return self
        return TrafficSpec.poisson(self.mean_arrival_rate, self.frame_size)
