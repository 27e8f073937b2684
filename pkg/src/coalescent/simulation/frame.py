from dataclasses import dataclass
from typing import Optional


@dataclass(slots=True)
class Frame:
    """
    A frame travelling through the transmission queue. Times are in seconds.
    """
    arrival_time: float
    size: int
    service_start: Optional[float] = None
    departure: Optional[float] = None

    @property
    def queueing_delay(self) -> float:
        """
        Time spent waiting in the queue before transmission started.
        """
        return self.service_start - self.arrival_time
