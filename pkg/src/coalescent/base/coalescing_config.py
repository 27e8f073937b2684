from __future__ import annotations
from dataclasses import dataclass
import math
from typing import Optional


class InvalidThresholdException(Exception):
    def __init__(self, name: str, value: int):
        super().__init__(f'Queue threshold {name} must be an integer >= 1 (got {value})')


class ThresholdOrderException(Exception):
    def __init__(self, q_fast: int, q_deep: int):
        super().__init__(f'Q_f <= Q_d required (got Q_f={q_fast}, Q_d={q_deep})')


class InvalidMaxDwellException(Exception):
    def __init__(self, max_dwell: float):
        super().__init__(f'Maximum dwell time must be positive (got {max_dwell})')


@dataclass(frozen=True)
class CoalescingConfig:
    """
    Frame coalescing parameters. The interface leaves Fast-Wake once q_fast frames are buffered and Deep-Sleep once
    q_deep frames are buffered.
    """
    q_fast: int = 1
    """
    Wake-up threshold in Fast-Wake (Q_f).
    """
    q_deep: int = 1
    """
    Wake-up threshold in Deep-Sleep (Q_d).
    """
    max_dwell: Optional[float] = None
    """
    Optional cap (seconds) on the time the oldest buffered frame may wait while the interface sleeps. Only the
    simulator honours it, the analytical model ignores it.
    """

    def __post_init__(self):
        """
        Validates the thresholds.

        :raises InvalidThresholdException: Raised if a threshold is not an integer >= 1.
        :raises ThresholdOrderException:   Raised if q_fast > q_deep.
        :raises InvalidMaxDwellException:  Raised if max_dwell is given but not positive.
        """
        for name in ['q_fast', 'q_deep']:
            value = getattr(self, name)

            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidThresholdException(name, value)

        if self.q_fast > self.q_deep:
            raise ThresholdOrderException(self.q_fast, self.q_deep)

        if self.max_dwell is not None and (not (self.max_dwell > 0) or math.isinf(self.max_dwell)):
            raise InvalidMaxDwellException(self.max_dwell)
