import math
from typing import List
import unittest

from src.coalescent.base.coalescing_config import CoalescingConfig
from src.coalescent.base.phy_profile import PhyProfile
from src.coalescent.base.traffic_spec import TrafficSpec
from src.coalescent.model.energy_model import EnergyModel
from src.coalescent.simulation.phy_state import PhyState
from src.coalescent.simulation.sim_report import ReportInvariantException, SimReport, WakeReason
from src.coalescent.simulation.simulator import InvalidHorizonException, Simulator, simulate
from src.coalescent.traffic.trace import TraceRecord

_PROFILE = PhyProfile()
_US = 1e-6
_DELTA = 1e-18


def _scripted(times_us: List[float], cfg: CoalescingConfig, horizon_us: float) -> SimReport:
    traffic = TrafficSpec.from_trace([TraceRecord(time * _US, 1500) for time in times_us])
    return Simulator(_PROFILE, cfg, traffic, horizon_us * _US, record_cycles=True).run().check_invariants(cfg)


class TestSimulator(unittest.TestCase):
    def test_deep_sleep_cycle(self):
        report = _scripted([10.0], CoalescingConfig(1, 1), 20.0)
        cycle = report.cycle_log[0]

        self._assert_intervals(cycle.intervals, [
            (PhyState.ATOF, 0.0, 0.9),
            (PhyState.FAST_WAKE, 0.9, 4.4),
            (PhyState.FTOD, 4.4, 5.4),
            (PhyState.DEEP_SLEEP, 5.4, 10.0),
            (PhyState.DTOA, 10.0, 15.5),
            (PhyState.ACTIVE, 15.5, 15.8),
        ])
        self.assertAlmostEqual(report.mean_queue_delay, 5.5 * _US, delta=_DELTA)
        self.assertAlmostEqual(cycle.t_fast, 3.5 * _US, delta=_DELTA)
        self.assertAlmostEqual(cycle.t_deep, 4.6 * _US, delta=_DELTA)
        self.assertAlmostEqual(cycle.t_transition, 7.4 * _US, delta=_DELTA)
        self.assertAlmostEqual(cycle.t_busy, 0.3 * _US, delta=_DELTA)
        self.assertTrue(cycle.entered_deep)
        self.assertEqual(cycle.wake_reason, WakeReason.THRESHOLD)
        self.assertEqual(cycle.queue_at_wake, 1)
        self.assertEqual(cycle.frames_served, 1)
        self.assertAlmostEqual(cycle.end, 15.8 * _US, delta=_DELTA)

        # The next cycle runs AtoF and Fast-Wake until the horizon.
        self.assertEqual(report.cycles, 2)
        self.assertEqual(report.deep_cycles, 1)
        self.assertAlmostEqual(report.t_fast, 6.8 * _US, delta=1e-17)
        self.assertAlmostEqual(report.t_transition, 8.3 * _US, delta=1e-17)
        self.assertAlmostEqual(report.phi_sim, (0.3 + 8.3 + 0.7 * 6.8 + 0.1 * 4.6) / 20, delta=1e-12)

    def test_arrival_during_atof(self):
        report = _scripted([0.5], CoalescingConfig(1, 1), 2.0)
        cycle = report.cycle_log[0]

        self._assert_intervals(cycle.intervals, [
            (PhyState.ATOF, 0.0, 0.9),
            (PhyState.FAST_WAKE, 0.9, 0.9),
            (PhyState.FTOA, 0.9, 1.24),
            (PhyState.ACTIVE, 1.24, 1.54),
        ])
        self.assertAlmostEqual(report.mean_queue_delay, 0.74 * _US, delta=_DELTA)
        self.assertEqual(cycle.t_fast, 0.0)
        self.assertFalse(cycle.entered_deep)

    def test_arrival_during_fast_wake(self):
        report = _scripted([2.0], CoalescingConfig(1, 1), 3.0)
        cycle = report.cycle_log[0]

        self._assert_intervals(cycle.intervals, [
            (PhyState.ATOF, 0.0, 0.9),
            (PhyState.FAST_WAKE, 0.9, 2.0),
            (PhyState.FTOA, 2.0, 2.34),
            (PhyState.ACTIVE, 2.34, 2.64),
        ])
        self.assertAlmostEqual(cycle.t_fast, 1.1 * _US, delta=_DELTA)
        self.assertAlmostEqual(report.mean_queue_delay, 0.34 * _US, delta=_DELTA)

    def test_periodic_trace(self):
        # One frame every 20 us: after the first cycle every cycle repeats AtoF 0.9, Fast-Wake 3.5, FtoD 1.0,
        # Deep-Sleep 8.8, DtoA 5.5 and 0.3 us of transmission.
        report = _scripted([10.0 + 20.0 * k for k in range(50)], CoalescingConfig(1, 1), 1000.0)
        first = 7.7 + 0.7 * 3.5 + 0.1 * 4.6
        steady = 7.7 + 0.7 * 3.5 + 0.1 * 8.8
        tail = 0.9 + 0.7 * 3.3

        self.assertEqual(report.frames_in, 50)
        self.assertEqual(report.frames_out, 50)
        self.assertEqual(report.cycles, 51)
        self.assertEqual(report.deep_cycles, 50)
        self.assertEqual(report.max_queue_length, 1)
        self.assertAlmostEqual(report.mean_queue_delay, 5.5 * _US, delta=1e-15)
        self.assertAlmostEqual(report.phi_sim, (first + 49 * steady + tail) / 1000.0, delta=1e-9)

    def test_threshold_coalescing(self):
        report = _scripted([1.0, 1.5, 2.0], CoalescingConfig(3, 3), 10.0)
        cycle = report.cycle_log[0]

        self.assertEqual(cycle.queue_at_wake, 3)
        self.assertEqual(cycle.frames_served, 3)
        self.assertAlmostEqual(cycle.t_fast, 1.1 * _US, delta=_DELTA)
        self.assertEqual(report.max_queue_length, 3)

        # Served back to back once FtoA ends at 2.34 us.
        start = 2.34
        delays = [start - 1.0, start + 0.3 - 1.5, start + 0.6 - 2.0]
        self.assertAlmostEqual(report.mean_queue_delay, sum(delays) / 3 * _US, delta=1e-17)

    def test_max_dwell_in_deep_sleep(self):
        cfg = CoalescingConfig(1, 4, max_dwell=20 * _US)
        report = _scripted([10.0], cfg, 50.0)
        cycle = report.cycle_log[0]

        self.assertEqual(cycle.wake_reason, WakeReason.MAX_DWELL)
        self.assertEqual(cycle.queue_at_wake, 1)
        self.assertAlmostEqual(report.mean_queue_delay, 25.5 * _US, delta=1e-17)

        uncapped = _scripted([10.0], CoalescingConfig(1, 4), 50.0)
        self.assertEqual(uncapped.frames_out, 0)
        self.assertEqual(uncapped.frames_queued, 1)

    def test_max_dwell_during_ftod(self):
        cfg = CoalescingConfig(1, 4, max_dwell=0.5 * _US)
        report = _scripted([4.5], cfg, 20.0)
        cycle = report.cycle_log[0]

        self.assertEqual([interval.state for interval in cycle.intervals], [
            PhyState.ATOF, PhyState.FAST_WAKE, PhyState.FTOD, PhyState.DTOA, PhyState.ACTIVE,
        ])
        self.assertEqual(cycle.wake_reason, WakeReason.MAX_DWELL)
        self.assertAlmostEqual(report.mean_queue_delay, 6.4 * _US, delta=1e-17)

    def test_poisson_invariants(self):
        for q_fast, q_deep in [(1, 1), (2, 8), (8, 32)]:
            cfg = CoalescingConfig(q_fast, q_deep)
            report = Simulator(_PROFILE, cfg, TrafficSpec.from_load(10e9), 0.01, seed=3, record_cycles=True).run()

            report.check_invariants(cfg)
            self.assertEqual(report.t_total, 0.01)
            self.assertGreater(report.frames_out, 0)
            self.assertEqual(len(report.cycle_log), report.cycles)
            self.assertEqual(report.deep_cycles, sum(cycle.entered_deep for cycle in report.cycle_log))

    def test_deterministic(self):
        cfg = CoalescingConfig(2, 8)
        traffic = TrafficSpec.from_load(6e9)

        self.assertEqual(simulate(_PROFILE, cfg, traffic, 0.005, 42), simulate(_PROFILE, cfg, traffic, 0.005, 42))
        self.assertNotEqual(simulate(_PROFILE, cfg, traffic, 0.005, 42).phi_sim,
            simulate(_PROFILE, cfg, traffic, 0.005, 43).phi_sim)

    def test_agrees_with_model(self):
        for load, cfg, horizon in [(2e9, CoalescingConfig(1, 1), 0.2), (20e9, CoalescingConfig(8, 32), 0.05)]:
            traffic = TrafficSpec.from_load(load)
            phi_model = EnergyModel.energy_ratio(_PROFILE, cfg, traffic).phi
            phi_sim = sum(simulate(_PROFILE, cfg, traffic, horizon, seed).phi_sim for seed in [1, 2]) / 2

            self.assertAlmostEqual(phi_sim, phi_model, delta=0.015, msg=(load, cfg))

    def test_delay_grows_with_thresholds(self):
        for load in range(2, 39, 4):
            traffic = TrafficSpec.from_load(load * 1e9)
            delays = [
                simulate(_PROFILE, CoalescingConfig(q_fast, q_deep), traffic, 0.02, 1).mean_queue_delay
                for q_fast, q_deep in [(1, 1), (8, 32), (32, 128)]
            ]

            self.assertEqual(delays, sorted(delays), load)
            self.assertGreater(delays[2], delays[0], load)

    def test_fifo_departures(self):
        cfg = CoalescingConfig(2, 8)
        report = simulate(_PROFILE, cfg, TrafficSpec.from_load(30e9), 0.005, 4, record_cycles=True)
        served = [frame for cycle in report.cycle_log for frame in cycle.served]
        arrivals = [frame.arrival_time for frame in served]
        departures = [frame.departure for frame in served]

        report.check_invariants(cfg)
        self.assertEqual(len(served), report.frames_out)
        self.assertTrue(all(earlier < later for earlier, later in zip(arrivals, arrivals[1:])))
        self.assertTrue(all(earlier < later for earlier, later in zip(departures, departures[1:])))
        self.assertEqual(max(frame.queueing_delay for frame in served), report.max_queue_delay)

    def test_wait_bound_without_coalescing(self):
        bound = _PROFILE.t_atof + _PROFILE.t_idle + _PROFILE.t_ftod + _PROFILE.t_dtoa

        for load in [2e9, 6e9, 10e9]:
            for seed in [1, 2]:
                report = simulate(_PROFILE, CoalescingConfig(1, 1), TrafficSpec.from_load(load), 0.02, seed)

                self.assertGreater(report.deep_cycles, 0)
                self.assertLessEqual(report.max_queue_delay, bound + 1e-15, (load, seed))
                self.assertGreaterEqual(report.max_queue_delay, report.mean_queue_delay)

    def test_invalid_horizon(self):
        for horizon in [0.0, -1.0, math.inf]:
            with self.assertRaises(InvalidHorizonException):
                Simulator(_PROFILE, CoalescingConfig(), TrafficSpec.from_load(2e9), horizon)

    def test_invariant_violation(self):
        report = simulate(_PROFILE, CoalescingConfig(), TrafficSpec.from_load(2e9), 0.001, 1)
        broken = SimReport(**{**report.__dict__, 't_fast': report.t_fast + 1e-3})

        with self.assertRaises(ReportInvariantException):
            broken.check_invariants()

    def test_cycle_log_violations(self):
        report = _scripted([10.0, 10.5, 11.0], CoalescingConfig(1, 1), 30.0)
        cycle = report.cycle_log[0]

        self.assertTrue(cycle.complete)
        self.assertFalse(report.cycle_log[-1].complete)
        self.assertEqual(len(cycle.served), 3)

        cycle.served.reverse()
        with self.assertRaises(ReportInvariantException):
            report.check_invariants()

        cycle.served.reverse()
        cycle.intervals.pop()
        with self.assertRaises(ReportInvariantException):
            report.check_invariants()

    def _assert_intervals(self, intervals, expected):
        self.assertEqual([interval.state for interval in intervals], [state for state, _, _ in expected])

        for interval, (state, start, end) in zip(intervals, expected):
            self.assertAlmostEqual(interval.start, start * _US, delta=_DELTA, msg=state)
            self.assertAlmostEqual(interval.end, end * _US, delta=_DELTA, msg=state)
