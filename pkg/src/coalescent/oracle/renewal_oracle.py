from __future__ import annotations
from dataclasses import dataclass
import logging
import math

import numpy as np

from ..base.coalescing_config import CoalescingConfig
from ..base.phy_profile import PhyProfile
from ..helpers.statistics import RunningMoments
from .samplers import InterarrivalSampler

logger = logging.getLogger(__name__)

# Cycles per batch. Fixed, so a seed always yields the same draw sequence.
_CHUNK_CYCLES = 8192

# Standard errors an absolute tolerance stands for.
_TOLERANCE_SPREAD = 3.0


class InvalidCycleCountException(Exception):
    def __init__(self, n_cycles: int):
        super().__init__(f'At least one cycle is required (got {n_cycles})')


@dataclass(frozen=True)
class Estimate:
    """
    Sample mean with its standard error.
    """
    value: float
    standard_error: float

    def z_score(self, reference: float, abs_tol: float = 0.0) -> float:
        """
        Standardized deviation of the estimate from a reference value. The standard error is floored at abs_tol / 3,
        so an estimate whose samples are (nearly) all equal counts as agreeing when it is within about abs_tol of the
        reference. Without any spread or tolerance, only an exact match scores zero.

        :param reference: Value to compare with.
        :type reference:  float
        :param abs_tol:   Accepted absolute deviation for degenerate estimates, defaults to 0.0
        :type abs_tol:    float, optional

        :return: (value - reference) / max(standard_error, abs_tol / 3).
        :rtype:  float
        """
        deviation = self.value - reference
        scale = max(self.standard_error, abs_tol / _TOLERANCE_SPREAD)

        if scale > 0:
            return deviation / scale
        return 0.0 if deviation == 0 else math.copysign(math.inf, deviation)


@dataclass(frozen=True)
class OracleEstimate:
    """
    Monte-Carlo estimates of the per-cycle model quantities.
    """
    p_deep: Estimate
    e_tf: Estimate
    e_td: Estimate
    n_cycles: int
    rng_seed: int


def estimate_cycle_quantities(
    profile: PhyProfile,
    cfg: CoalescingConfig,
    sampler: InterarrivalSampler,
    n_cycles: int,
    seed: int,
) -> OracleEstimate:
    """
    Simulates independent coalescing cycles from their arrival instants alone and estimates the Deep-Sleep
    probability and the mean Fast-Wake and Deep-Sleep periods. Arrival instants are t_1 = T_e and
    t_k = t_(k-1) + I_k. Fast-Wake lasts min(t_Qf, T_AtoF + T_idle) - T_AtoF (clamped to [0, T_idle]); Deep-Sleep is
    entered iff t_Qf > T_AtoF + T_idle and then lasts max(t_Qd - (T_AtoF + T_idle) - T_FtoD, 0). An arrival exactly at
    timer expiry wakes the interface. The max_dwell cap is not modeled.

    :param profile:  PHY constants.
    :type profile:   PhyProfile
    :param cfg:      Coalescing thresholds.
    :type cfg:       CoalescingConfig
    :param sampler:  Source of empty periods and gaps.
    :type sampler:   InterarrivalSampler
    :param n_cycles: Number of cycles to simulate.
    :type n_cycles:  int
    :param seed:     Random seed.
    :type seed:      int

    :raises InvalidCycleCountException: Raised if n_cycles < 1.

    :return: Estimates with standard errors.
    :rtype:  OracleEstimate
    """
    if isinstance(n_cycles, bool) or not isinstance(n_cycles, int) or n_cycles < 1:
        raise InvalidCycleCountException(n_cycles)

    rng = np.random.default_rng(seed)
    window = profile.t_sleep_window
    p_deep = RunningMoments()
    e_tf = RunningMoments()
    e_td = RunningMoments()
    done = 0

    while done < n_cycles:
        size = min(_CHUNK_CYCLES, n_cycles - done)
        arrivals = np.empty((size, cfg.q_deep), dtype=np.float64)
        arrivals[:, 0] = sampler.draw_empty(rng, size)

        if cfg.q_deep > 1:
            arrivals[:, 1:] = sampler.draw_gaps(rng, (size, cfg.q_deep - 1))
        np.cumsum(arrivals, axis=1, out=arrivals)

        t_fast = arrivals[:, cfg.q_fast - 1]
        fast = np.clip(np.minimum(t_fast, window) - profile.t_atof, 0.0, profile.t_idle)
        deep_entered = t_fast > window
        deep = np.where(deep_entered, np.maximum(arrivals[:, -1] - window - profile.t_ftod, 0.0), 0.0)

        p_deep.update(deep_entered.astype(np.float64))
        e_tf.update(fast)
        e_td.update(deep)
        done += size

    estimate = OracleEstimate(
        p_deep=Estimate(p_deep.mean, p_deep.standard_error),
        e_tf=Estimate(e_tf.mean, e_tf.standard_error),
        e_td=Estimate(e_td.mean, e_td.standard_error),
        n_cycles=n_cycles,
        rng_seed=seed,
    )
    logger.debug('Oracle with %d cycles, Q=(%d, %d): p_d=%.6f, E[T_f]=%.6g, E[T_d]=%.6g', n_cycles, cfg.q_fast,
        cfg.q_deep, estimate.p_deep.value, estimate.e_tf.value, estimate.e_td.value)
    return estimate
