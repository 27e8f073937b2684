import math
import unittest

import numpy as np

from src.coalescent.base.coalescing_config import CoalescingConfig
from src.coalescent.base.phy_profile import PhyProfile
from src.coalescent.helpers.statistics import RunningMoments, mean_confidence_interval
from src.coalescent.model.energy_model import EnergyModel
from src.coalescent.oracle.renewal_oracle import Estimate, InvalidCycleCountException, estimate_cycle_quantities
from src.coalescent.oracle.samplers import (
    DeterministicSampler,
    ExponentialSampler,
    InvalidSamplerException,
    SamplerKind,
    UniformSampler,
    create_sampler,
)

_PROFILE = PhyProfile()
_LAMBDA_2G = 2e9 / (1500 * 8)
_Z_LIMIT = 4.0


class TestRenewalOracle(unittest.TestCase):
    def test_poisson_example(self):
        cfg = CoalescingConfig(1, 1)
        estimate = estimate_cycle_quantities(_PROFILE, cfg, ExponentialSampler(_LAMBDA_2G), 1_000_000, 1)

        self.assertEqual(estimate.n_cycles, 1_000_000)
        self.assertEqual(estimate.rng_seed, 1)
        self.assertAlmostEqual(estimate.p_deep.value, 0.4803, delta=0.002)
        self._assert_agrees(estimate, cfg, _LAMBDA_2G)

    def test_poisson_grid(self):
        for rate in [_LAMBDA_2G, 1e6, 3e6]:
            for q_fast, q_deep in [(1, 4), (2, 8), (8, 32)]:
                cfg = CoalescingConfig(q_fast, q_deep)
                estimate = estimate_cycle_quantities(_PROFILE, cfg, ExponentialSampler(rate), 200_000, 11)
                self._assert_agrees(estimate, cfg, rate)

    def test_deep_thresholds_over_default_loads(self):
        cfg = CoalescingConfig(32, 128)

        for load in range(2, 39, 4):
            rate = load * 1e9 / (1500 * 8)
            estimate = estimate_cycle_quantities(_PROFILE, cfg, ExponentialSampler(rate), 100_000, 1)
            self._assert_agrees(estimate, cfg, rate)

    def test_timer_always_expires(self):
        cfg = CoalescingConfig(1, 1)
        estimate = estimate_cycle_quantities(_PROFILE, cfg, DeterministicSampler(1.0, 1.0), 1000, 3)

        self.assertEqual(estimate.p_deep.value, 1.0)
        self.assertEqual(estimate.p_deep.standard_error, 0.0)
        self.assertAlmostEqual(estimate.e_tf.value, _PROFILE.t_idle, delta=1e-18)
        self.assertAlmostEqual(estimate.e_td.value, 1.0 - _PROFILE.t_sleep_window - _PROFILE.t_ftod, delta=1e-12)

    def test_burst_during_atof(self):
        estimate = estimate_cycle_quantities(_PROFILE, CoalescingConfig(2, 4), DeterministicSampler(0.0, 0.0), 1000, 3)

        self.assertEqual(estimate.p_deep.value, 0.0)
        self.assertEqual(estimate.e_tf.value, 0.0)
        self.assertEqual(estimate.e_td.value, 0.0)

    def test_deterministic_given_seed(self):
        cfg = CoalescingConfig(2, 8)
        sampler = ExponentialSampler(1e6)

        first = estimate_cycle_quantities(_PROFILE, cfg, sampler, 20_000, 5)
        second = estimate_cycle_quantities(_PROFILE, cfg, sampler, 20_000, 5)
        other = estimate_cycle_quantities(_PROFILE, cfg, sampler, 20_000, 6)

        self.assertEqual(first, second)
        self.assertNotEqual(first.e_tf.value, other.e_tf.value)

    def test_bounds(self):
        sampler = UniformSampler(0.0, 4e-6)
        estimate = estimate_cycle_quantities(_PROFILE, CoalescingConfig(2, 8), sampler, 50_000, 2)

        self.assertGreaterEqual(estimate.e_tf.value, 0.0)
        self.assertLessEqual(estimate.e_tf.value, _PROFILE.t_idle)
        self.assertGreaterEqual(estimate.e_td.value, 0.0)
        self.assertGreater(estimate.p_deep.standard_error, 0.0)

    def test_invalid_cycles(self):
        for n_cycles in [0, -1, 1.5]:
            with self.assertRaises(InvalidCycleCountException):
                estimate_cycle_quantities(_PROFILE, CoalescingConfig(), ExponentialSampler(1e6), n_cycles, 1)

    def test_z_score(self):
        self.assertEqual(Estimate(1.0, 0.5).z_score(0.0), 2.0)
        self.assertEqual(Estimate(1.0, 0.0).z_score(1.0), 0.0)
        self.assertEqual(Estimate(1.0, 0.0).z_score(0.5), math.inf)
        self.assertEqual(Estimate(1.0, 0.0).z_score(1.5), -math.inf)
        self.assertAlmostEqual(Estimate(1.0, 0.0).z_score(0.5, abs_tol=0.6), 2.5, delta=1e-12)
        self.assertAlmostEqual(Estimate(1.0, 0.1).z_score(0.5, abs_tol=0.6), 2.5, delta=1e-12)
        self.assertEqual(Estimate(1.0, 0.5).z_score(0.0, abs_tol=0.6), 2.0)

    def test_z_score_ignores_rounding_spread(self):
        # Rounding residue as standard error must not turn a match into a large z.
        estimate = Estimate(3.5e-6, 1e-22)

        self.assertLessEqual(abs(estimate.z_score(3.5e-6 - 1e-20, abs_tol=1e-11)), 1e-8)

    def _assert_agrees(self, estimate, cfg, rate):
        # Zero-variance estimates (e.g. every cycle reached Deep-Sleep) may miss the reference by a few samples.
        probability_tol = 3 / estimate.n_cycles
        duration_tol = 3 * (cfg.q_deep / rate + _PROFILE.t_idle) / estimate.n_cycles
        references = [
            (estimate.p_deep, EnergyModel.p_deep(_PROFILE, cfg, rate), probability_tol),
            (estimate.e_tf, EnergyModel.expected_fast_wake(_PROFILE, cfg, rate), duration_tol),
            (estimate.e_td, EnergyModel.expected_deep_sleep(_PROFILE, cfg, rate), duration_tol),
        ]

        for value, reference, abs_tol in references:
            self.assertLessEqual(abs(value.z_score(reference, abs_tol)), _Z_LIMIT, (rate, cfg, value, reference))


class TestSamplers(unittest.TestCase):
    def test_means(self):
        rng = np.random.default_rng(4)

        self.assertAlmostEqual(float(np.mean(ExponentialSampler(1e6).draw_gaps(rng, (1000, 100)))), 1e-6, delta=2e-8)
        self.assertAlmostEqual(float(np.mean(UniformSampler(1e-6, 3e-6).draw_gaps(rng, (1000, 100)))), 2e-6,
            delta=2e-8)
        self.assertEqual(DeterministicSampler(2e-6).mean_gap(), 2e-6)
        self.assertEqual(UniformSampler(1e-6, 3e-6).mean_gap(), 2e-6)
        self.assertEqual(DeterministicSampler(2e-6).draw_empty(rng, 3).tolist(), [2e-6] * 3)

    def test_create_sampler(self):
        for kind in SamplerKind:
            self.assertAlmostEqual(create_sampler(kind, 1e6).mean_gap(), 1e-6, delta=1e-18, msg=kind)

        self.assertIsInstance(create_sampler(SamplerKind.EXPONENTIAL, 1e6), ExponentialSampler)
        self.assertEqual(create_sampler(SamplerKind.DETERMINISTIC, 1e6).empty, 1e-6)
        self.assertEqual(create_sampler(SamplerKind.UNIFORM, 1e6).empty_range, (0.0, 2e-6))

        with self.assertRaises(InvalidSamplerException):
            create_sampler(SamplerKind.UNIFORM, 0.0)
        with self.assertRaises(InvalidSamplerException):
            create_sampler('gamma', 1e6)

    def test_invalid(self):
        with self.assertRaises(InvalidSamplerException):
            ExponentialSampler(0.0)
        with self.assertRaises(InvalidSamplerException):
            DeterministicSampler(-1.0)
        with self.assertRaises(InvalidSamplerException):
            UniformSampler(2.0, 1.0)


class TestStatistics(unittest.TestCase):
    def test_running_moments_match_numpy(self):
        samples = np.random.default_rng(9).exponential(2.0, 10_001)
        moments = RunningMoments()

        for start in range(0, samples.size, 4096):
            moments.update(samples[start:start + 4096])

        self.assertEqual(moments.count, samples.size)
        self.assertAlmostEqual(moments.mean, float(np.mean(samples)), delta=1e-12)
        self.assertAlmostEqual(moments.variance, float(np.var(samples, ddof=1)), delta=1e-10)
        self.assertAlmostEqual(moments.standard_error, float(np.std(samples, ddof=1)) / math.sqrt(samples.size),
            delta=1e-12)

    def test_running_moments_constant_batches(self):
        moments = RunningMoments()

        for size in [4096, 4096, 1809]:
            moments.update(np.full(size, 0.1))

        self.assertEqual(moments.count, 10_001)
        self.assertEqual(moments.mean, 0.1)
        self.assertEqual(moments.variance, 0.0)
        self.assertEqual(moments.standard_error, 0.0)

    def test_confidence_interval(self):
        mean, half_width = mean_confidence_interval([1.0, 2.0, 3.0])

        self.assertAlmostEqual(mean, 2.0, delta=1e-15)
        # Student-t quantile with two degrees of freedom in closed form.
        quantile = 0.95 / math.sqrt(2 * 0.975 * 0.025)
        self.assertAlmostEqual(half_width, quantile / math.sqrt(3), delta=1e-9)
        self.assertEqual(mean_confidence_interval([0.25]), (0.25, None))
        self.assertEqual(mean_confidence_interval([0.5, 0.5])[1], 0.0)
