from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
import math
from typing import List, Optional

from ..base.coalescing_config import CoalescingConfig
from .frame import Frame
from .phy_state import PhyState

# Relative tolerance of the time partition check.
_PARTITION_TOLERANCE = 1e-9


class ReportInvariantException(Exception):
    def __init__(self, reason: str):
        super().__init__(f'Simulation report violates an invariant: {reason}')


class WakeReason(str, Enum):
    """
    Enum of the reasons an interface leaves a low-power mode.
    """
    THRESHOLD = 'threshold'
    MAX_DWELL = 'max_dwell'


@dataclass(frozen=True)
class StateInterval:
    state: PhyState
    start: float
    end: float

    @property
    def duration(self) -> float:
        return self.end - self.start


@dataclass
class CycleBreakdown:
    """
    Time-in-state accounting of one coalescing cycle (sleep entry to the end of the following busy period).
    """
    index: int
    start: float
    end: Optional[float] = None
    t_fast: float = 0.0
    t_deep: float = 0.0
    t_transition: float = 0.0
    t_busy: float = 0.0
    entered_deep: bool = False
    wake_reason: Optional[WakeReason] = None
    queue_at_wake: int = 0
    frames_served: int = 0
    intervals: List[StateInterval] = field(default_factory=list)
    served: List[Frame] = field(default_factory=list)
    """
    Frames that departed during the cycle, in departure order.
    """

    @property
    def complete(self) -> bool:
        return self.end is not None


@dataclass
class SimReport:
    """
    Aggregate outcome of one simulation run. Durations are in seconds.
    """
    t_active_busy: float
    t_fast: float
    t_deep: float
    t_transition: float
    t_total: float
    phi_sim: float
    mean_queue_delay: float
    max_queue_delay: float
    frames_in: int
    frames_out: int
    frames_queued: int
    cycles: int
    deep_cycles: int
    max_queue_length: int
    seed: int
    horizon: float
    cycle_log: Optional[List[CycleBreakdown]] = None

    @property
    def rho_f_sim(self) -> float:
        return self.t_fast / self.t_total

    @property
    def rho_d_sim(self) -> float:
        return self.t_deep / self.t_total

    @property
    def p_deep_sim(self) -> float:
        """
        Share of cycles that reached Deep-Sleep (0 if no cycle started).
        """
        return self.deep_cycles / self.cycles if self.cycles else 0.0

    def check_invariants(self, cfg: Optional[CoalescingConfig] = None) -> SimReport:
        """
        Re-checks the time partition and frame conservation. With a cycle log it also checks that the state intervals
        of every complete cycle cover it and that frames departed in arrival order; with a config as well, that every
        wake-up met its threshold or was forced by the dwell cap.

        :param cfg: Coalescing thresholds used for the run, defaults to None
        :type cfg:  CoalescingConfig, optional

        :raises ReportInvariantException: Raised on the first violated invariant.

        :return: The current report.
        :rtype:  SimReport
        """
        buckets = self.t_active_busy + self.t_fast + self.t_deep + self.t_transition

        if abs(buckets - self.t_total) > _PARTITION_TOLERANCE * self.t_total:
            raise ReportInvariantException(f'state times sum to {buckets!r}, expected {self.t_total!r}')
        if self.frames_in != self.frames_out + self.frames_queued:
            raise ReportInvariantException(
                f'{self.frames_in} frames in but {self.frames_out} out and {self.frames_queued} queued'
            )
        if not (0 <= self.phi_sim <= 1 + _PARTITION_TOLERANCE):
            raise ReportInvariantException(f'phi {self.phi_sim!r} outside [0, 1]')

        if cfg is not None and self.cycle_log:
            for cycle in self.cycle_log:
                if cycle.wake_reason != WakeReason.THRESHOLD:
                    continue
                threshold = cfg.q_deep if cycle.entered_deep else cfg.q_fast

                if cycle.queue_at_wake < threshold:
                    raise ReportInvariantException(
                        f'cycle {cycle.index} woke with {cycle.queue_at_wake} frames, threshold {threshold}'
                    )
        if self.cycle_log:
            self._check_cycle_log()
        return self

    def _check_cycle_log(self) -> None:
        previous_arrival = -math.inf

        for cycle in self.cycle_log:
            if cycle.complete:
                covered = sum(interval.duration for interval in cycle.intervals)

                if abs(covered - (cycle.end - cycle.start)) > _PARTITION_TOLERANCE * max(cycle.end, self.t_total):
                    raise ReportInvariantException(
                        f'state intervals of cycle {cycle.index} cover {covered!r} of {cycle.end - cycle.start!r}'
                    )

            # FIFO
            for frame in cycle.served:
                if frame.arrival_time < previous_arrival:
                    raise ReportInvariantException(f'frame arrived at {frame.arrival_time!r} departed out of order')
                previous_arrival = frame.arrival_time
