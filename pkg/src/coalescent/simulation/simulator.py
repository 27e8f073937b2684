from __future__ import annotations
from collections import deque
import logging
import math
from typing import Deque, Dict, List, Optional

from ..base.coalescing_config import CoalescingConfig
from ..base.phy_profile import PhyProfile
from ..base.traffic_spec import TrafficSpec
from ..traffic.sources import create_source
from .event_queue import Event, EventQueue, EventType
from .frame import Frame
from .phy_state import PhyState
from .sim_report import CycleBreakdown, SimReport, StateInterval, WakeReason

logger = logging.getLogger(__name__)


class InvalidHorizonException(Exception):
    def __init__(self, horizon: float):
        super().__init__(f'Simulation horizon must be positive and finite (got {horizon})')


class Simulator:
    """
    Discrete-event simulator of one dual-mode EEE interface with an infinite FIFO transmission queue.

    The run starts at a cycle boundary (empty queue, buffer just emptied). Every time the queue empties the PHY
    moves Active -> AtoF -> FastWake; it wakes (FtoA) as soon as q_fast frames are buffered, otherwise the idle
    timer sends it through FtoD to DeepSleep, which it leaves (DtoA) once q_deep frames are buffered. Transitions
    always run to completion; thresholds crossed meanwhile are evaluated when they end. Arrivals sharing a
    timestamp with a timer are handled first. With max_dwell set, a frame that has waited that long while the PHY
    sleeps forces the wake-up.

    A simulator instance performs a single run and owns all of its state.
    """

    def __init__(
        self,
        profile: PhyProfile,
        cfg: CoalescingConfig,
        traffic: TrafficSpec,
        horizon: float,
        seed: int = 0,
        record_cycles: bool = False,
    ):
        """
        Constructor

        :param profile:       PHY constants.
        :type profile:        PhyProfile
        :param cfg:           Coalescing thresholds and optional dwell cap.
        :type cfg:            CoalescingConfig
        :param traffic:       Arrival process.
        :type traffic:        TrafficSpec
        :param horizon:       Simulated time in seconds.
        :type horizon:        float
        :param seed:          Random seed of the arrival process, defaults to 0
        :type seed:           int, optional
        :param record_cycles: Keep a CycleBreakdown (state intervals, served frames) per cycle, defaults to False
        :type record_cycles:  bool, optional

        :raises InvalidHorizonException: Raised if the horizon is not positive.
        """
        if not (horizon > 0) or math.isinf(horizon):
            raise InvalidHorizonException(horizon)

        self._profile = profile
        self._cfg = cfg
        self._horizon = horizon
        self._seed = seed
        self._record = record_cycles
        self._source = create_source(traffic, seed)
        self._events = EventQueue()

        self._now = 0.0
        self._state = PhyState.ACTIVE
        self._state_since = 0.0
        self._time_in: Dict[PhyState, float] = {state: 0.0 for state in PhyState}

        self._queue: Deque[Frame] = deque()
        self._in_service: Optional[Frame] = None
        self._idle_timer: Optional[Event] = None
        self._dwell_timer: Optional[Event] = None
        self._dwell_expired = False

        self._cycle: Optional[CycleBreakdown] = None
        self._cycle_log: List[CycleBreakdown] = []
        self._cycles = 0
        self._deep_cycles = 0
        self._frames_in = 0
        self._frames_out = 0
        self._delay_sum = 0.0
        self._max_delay = 0.0
        self._max_queue = 0

    def run(self) -> SimReport:
        """
        Runs the event loop up to the horizon. Frames still queued at the horizon do not enter the delay
        statistics; state time up to the horizon is accounted.

        :return: Aggregate report.
        :rtype:  SimReport
        """
        self._schedule_next_arrival()
        self._begin_sleep()

        handlers = {
            EventType.ARRIVAL: self._on_arrival,
            EventType.DEPARTURE: self._on_departure,
            EventType.TRANSITION_END: self._on_transition_end,
            EventType.IDLE_TIMER: self._on_idle_timer,
            EventType.MAX_DWELL: self._on_max_dwell,
        }

        while True:
            next_time = self._events.peek_time()

            if next_time is None or next_time > self._horizon:
                break
            event = self._events.pop()
            self._now = event.time
            handlers[event.kind](event)

        self._now = self._horizon
        self._accrue()

        if self._record and self._cycle is not None:
            self._cycle_log.append(self._cycle)

        report = self._report()
        logger.debug('Simulated %.6g s (seed %d): %d cycles, %d frames out, phi=%.6f', self._horizon, self._seed,
            report.cycles, report.frames_out, report.phi_sim)
        return report

    def _on_arrival(self, event: Event) -> None:
        self._queue.append(Frame(self._now, event.payload))
        self._frames_in += 1
        queued = len(self._queue)
        self._max_queue = max(self._max_queue, queued)
        self._schedule_next_arrival()

        state = self._state

        if queued == 1 and self._cfg.max_dwell is not None and state in (
            PhyState.ATOF, PhyState.FAST_WAKE, PhyState.FTOD, PhyState.DEEP_SLEEP
        ):
            self._dwell_timer = self._events.schedule(self._now + self._cfg.max_dwell, EventType.MAX_DWELL)

        if state == PhyState.FAST_WAKE and queued >= self._cfg.q_fast:
            self._wake(PhyState.FTOA, WakeReason.THRESHOLD)
        elif state == PhyState.DEEP_SLEEP and queued >= self._cfg.q_deep:
            self._wake(PhyState.DTOA, WakeReason.THRESHOLD)

    def _on_departure(self, event: Event) -> None:
        frame = self._in_service
        frame.departure = self._now
        self._in_service = None
        self._frames_out += 1
        delay = frame.queueing_delay
        self._delay_sum += delay
        self._max_delay = max(self._max_delay, delay)
        self._cycle.frames_served += 1

        if self._record:
            self._cycle.served.append(frame)

        if self._queue:
            self._start_service()
        else:
            self._begin_sleep()

    def _on_transition_end(self, event: Event) -> None:
        state = self._state
        queued = len(self._queue)

        if state == PhyState.ATOF:
            self._enter(PhyState.FAST_WAKE)

            if queued >= self._cfg.q_fast:
                self._wake(PhyState.FTOA, WakeReason.THRESHOLD)
            elif self._dwell_expired:
                self._wake(PhyState.FTOA, WakeReason.MAX_DWELL)
            else:
                self._idle_timer = self._events.schedule(self._now + self._profile.t_idle, EventType.IDLE_TIMER)
        elif state == PhyState.FTOD:
            if queued >= self._cfg.q_deep:
                self._wake(PhyState.DTOA, WakeReason.THRESHOLD)
            elif self._dwell_expired:
                self._wake(PhyState.DTOA, WakeReason.MAX_DWELL)
            else:
                self._enter(PhyState.DEEP_SLEEP)
        else:
            self._enter(PhyState.ACTIVE)
            self._start_service()

    def _on_idle_timer(self, event: Event) -> None:
        self._idle_timer = None
        self._cycle.entered_deep = True
        self._deep_cycles += 1
        self._enter(PhyState.FTOD)
        self._events.schedule(self._now + self._profile.t_ftod, EventType.TRANSITION_END)

    def _on_max_dwell(self, event: Event) -> None:
        self._dwell_timer = None

        if self._state == PhyState.FAST_WAKE:
            self._wake(PhyState.FTOA, WakeReason.MAX_DWELL)
        elif self._state == PhyState.DEEP_SLEEP:
            self._wake(PhyState.DTOA, WakeReason.MAX_DWELL)
        else:
            # AtoF or FtoD, evaluated when the transition ends.
            self._dwell_expired = True

    def _begin_sleep(self) -> None:
        self._enter(PhyState.ATOF)

        if self._cycle is not None:
            self._cycle.end = self._now

            if self._record:
                self._cycle_log.append(self._cycle)

        self._cycle = CycleBreakdown(index=self._cycles, start=self._now)
        self._cycles += 1
        self._events.schedule(self._now + self._profile.t_atof, EventType.TRANSITION_END)

    def _wake(self, transition: PhyState, reason: WakeReason) -> None:
        self._events.cancel(self._idle_timer)
        self._events.cancel(self._dwell_timer)
        self._idle_timer = None
        self._dwell_timer = None
        self._dwell_expired = False

        self._cycle.wake_reason = reason
        self._cycle.queue_at_wake = len(self._queue)
        self._enter(transition)

        duration = self._profile.t_ftoa if transition == PhyState.FTOA else self._profile.t_dtoa
        self._events.schedule(self._now + duration, EventType.TRANSITION_END)

    def _start_service(self) -> None:
        frame = self._queue.popleft()
        frame.service_start = self._now
        self._in_service = frame
        self._events.schedule(self._now + self._profile.service_time(frame.size), EventType.DEPARTURE)

    def _schedule_next_arrival(self) -> None:
        arrival = self._source.next_arrival()

        if arrival is not None:
            self._events.schedule(arrival[0], EventType.ARRIVAL, arrival[1])

    def _enter(self, state: PhyState) -> None:
        self._accrue()
        self._state = state
        self._state_since = self._now

    def _accrue(self) -> None:
        """
        Books the time since the last state change to the current state, globally and for the running cycle.
        """
        elapsed = self._now - self._state_since
        state = self._state
        self._time_in[state] += elapsed
        cycle = self._cycle

        if cycle is None:
            return

        if state == PhyState.ACTIVE:
            cycle.t_busy += elapsed
        elif state == PhyState.FAST_WAKE:
            cycle.t_fast += elapsed
        elif state == PhyState.DEEP_SLEEP:
            cycle.t_deep += elapsed
        else:
            cycle.t_transition += elapsed

        if self._record:
            cycle.intervals.append(StateInterval(state, self._state_since, self._now))

    def _report(self) -> SimReport:
        time_in = self._time_in
        t_busy = time_in[PhyState.ACTIVE]
        t_fast = time_in[PhyState.FAST_WAKE]
        t_deep = time_in[PhyState.DEEP_SLEEP]
        t_transition = sum(time_in[state] for state in PhyState if state.is_transition)
        energy = t_busy + t_transition + self._profile.phi_fast * t_fast + self._profile.phi_deep * t_deep

        return SimReport(
            t_active_busy=t_busy,
            t_fast=t_fast,
            t_deep=t_deep,
            t_transition=t_transition,
            t_total=self._horizon,
            phi_sim=energy / self._horizon,
            mean_queue_delay=self._delay_sum / self._frames_out if self._frames_out else 0.0,
            max_queue_delay=self._max_delay,
            frames_in=self._frames_in,
            frames_out=self._frames_out,
            frames_queued=len(self._queue) + (1 if self._in_service is not None else 0),
            cycles=self._cycles,
            deep_cycles=self._deep_cycles,
            max_queue_length=self._max_queue,
            seed=self._seed,
            horizon=self._horizon,
            cycle_log=self._cycle_log if self._record else None,
        )


def simulate(
    profile: PhyProfile,
    cfg: CoalescingConfig,
    traffic: TrafficSpec,
    horizon: float,
    seed: int = 0,
    record_cycles: bool = False,
) -> SimReport:
    """
    Runs one simulation. See Simulator for the state machine.

    :raises InvalidHorizonException: Raised if the horizon is not positive.

    :return: Aggregate report.
    :rtype:  SimReport
    """
    return Simulator(profile, cfg, traffic, horizon, seed, record_cycles).run()
