from __future__ import annotations
from dataclasses import dataclass
import logging
import math
from typing import Iterable, Iterator, List, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

_COMMENT_PREFIX = '#'
_SEPARATOR = ','
_MIN_FRAME_SIZE = 1
_MAX_FRAME_SIZE = 65535


class TraceParseException(Exception):
    def __init__(self, line_number: int, reason: str):
        super().__init__(f'Trace error at line {line_number}: {reason}')
        self.line_number = line_number
        self.reason = reason


class EmptyTraceException(Exception):
    def __init__(self):
        super().__init__('Trace contains no records')


@dataclass(frozen=True)
class TraceRecord:
    """
    One frame of a trace.
    """
    timestamp: float
    """
    Arrival time in seconds relative to the trace start.
    """
    size: int
    """
    Frame size in bytes.
    """
    line_number: int = 0
    """
    Source line in the trace file (0 if the record was not parsed from text).
    """


def _lines(content: str | bytes) -> Iterator[Tuple[int, str]]:
    """
    Yields numbered lines, decoding bytes line by line so an encoding error names its line.
    """
    if isinstance(content, str):
        yield from enumerate(content.split('\n'), start=1)
        return

    for line_number, raw in enumerate(content.split(b'\n'), start=1):
        try:
            yield line_number, raw.decode('utf-8')
        except UnicodeDecodeError:
            raise TraceParseException(line_number, 'invalid UTF-8')


def parse_trace(content: str | bytes) -> List[TraceRecord]:
    """
    Parses trace text made of "timestamp_seconds,frame_bytes" lines. Empty lines and lines starting with '#' are
    skipped, CR before LF is accepted.

    :param content: Trace content (bytes are decoded as UTF-8).
    :type content:  str | bytes

    :raises TraceParseException: Raised on invalid UTF-8, malformed fields, out-of-range sizes or non-monotone
                                 timestamps.

    :return: Parsed records in file order.
    :rtype:  List[TraceRecord]
    """
    records: List[TraceRecord] = []
    previous = -math.inf

    for line_number, line in _lines(content):
        line = line.rstrip('\r').strip()

        if not line or line.startswith(_COMMENT_PREFIX):
            continue
        fields = [field.strip() for field in line.split(_SEPARATOR)]

        if len(fields) != 2:
            raise TraceParseException(line_number, f'expected 2 fields, got {len(fields)}')

        try:
            timestamp = float(fields[0])
        except ValueError:
            raise TraceParseException(line_number, f'timestamp "{fields[0]}" is not numeric')

        if not (fields[1].isascii() and fields[1].isdigit()):
            raise TraceParseException(line_number, f'size "{fields[1]}" is not an integer')
        size = int(fields[1])

        if not math.isfinite(timestamp) or timestamp < 0:
            raise TraceParseException(line_number, f'timestamp {fields[0]} out of range')
        if not (_MIN_FRAME_SIZE <= size <= _MAX_FRAME_SIZE):
            raise TraceParseException(line_number, f'size {size} out of range')
        if timestamp < previous:
            raise TraceParseException(line_number, 'non-monotone timestamp')

        previous = timestamp
        records.append(TraceRecord(timestamp, size, line_number))
    return records


def read_trace(path: str) -> List[TraceRecord]:
    """
    Reads and parses a trace file.

    :param path: Trace file path.
    :type path:  str

    :return: Parsed records.
    :rtype:  List[TraceRecord]
    """
    with open(path, 'rb') as f:
        records = parse_trace(f.read())

    logger.debug('Read %d records from %s', len(records), path)
    return records


def write_trace(records: Iterable[TraceRecord]) -> str:
    """
    Formats records in the trace file format.

    :param records: Records to format.
    :type records:  Iterable[TraceRecord]

    :return: Trace text (LF line endings).
    :rtype:  str
    """
    return ''.join(f'{record.timestamp!r},{record.size}\n' for record in records)


def generate_poisson_trace(arrival_rate: float, frame_size: int, duration: float, seed: int) -> List[TraceRecord]:
    """
    Creates a synthetic trace with exponential interarrival times.

    :param arrival_rate: Mean arrival rate in frames per second.
    :type arrival_rate:  float
    :param frame_size:   Size of every frame in bytes.
    :type frame_size:    int
    :param duration:     Trace length in seconds.
    :type duration:      float
    :param seed:         Random seed.
    :type seed:          int

    :return: Records with timestamps in [0, duration).
    :rtype:  List[TraceRecord]
    """
    rng = np.random.default_rng(seed)
    expected = int(arrival_rate * duration)
    timestamps = np.cumsum(rng.exponential(1 / arrival_rate, expected + 10 * int(math.sqrt(expected)) + 10))

    # Top up in the unlikely case the first batch ends early.
    while timestamps[-1] < duration:
        more = np.cumsum(rng.exponential(1 / arrival_rate, expected + 10)) + timestamps[-1]
        timestamps = np.concatenate([timestamps, more])

    return [TraceRecord(float(t), frame_size) for t in timestamps[timestamps < duration]]


def measured_rate(records: Sequence[TraceRecord], rate_scale: float = 1.0) -> float:
    """
    Returns the empirical arrival rate of a trace, (n - 1) frames over the replayed span.

    :param records:    Trace records.
    :type records:     Sequence[TraceRecord]
    :param rate_scale: Time scale applied on replay (see TraceSource).
    :type rate_scale:  float

    :raises EmptyTraceException: Raised if there are no records.

    :return: Arrival rate in frames per second (0 if the trace spans no time).
    :rtype:  float
    """
    if not records:
        raise EmptyTraceException()
    span = (records[-1].timestamp - records[0].timestamp) * rate_scale
    return (len(records) - 1) / span if span > 0 else 0.0


def mean_frame_size(records: Sequence[TraceRecord]) -> float:
    """
    Returns the mean frame size of a trace in bytes.

    :raises EmptyTraceException: Raised if there are no records.
    """
    if not records:
        raise EmptyTraceException()
    return sum(record.size for record in records) / len(records)
