import logging
import math

from ..base.coalescing_config import CoalescingConfig
from ..base.model_breakdown import ModelBreakdown
from ..base.phy_profile import PhyProfile
from ..base.traffic_spec import TrafficKind, TrafficSpec, InvalidArrivalRateException
from .gamma import poisson_pmf, regularized_upper_gamma

logger = logging.getLogger(__name__)


class UnstableLoadException(Exception):
    def __init__(self, rho: float):
        super().__init__(f'Utilization must be below 1 for a stable queue (got rho={rho:.6g})')
        self.rho = rho


class UnsupportedTrafficException(Exception):
    def __init__(self, kind: TrafficKind):
        super().__init__(f'The closed-form model needs Poisson traffic (got {kind.value})')


class InvalidProbabilityException(Exception):
    def __init__(self, probability: float):
        super().__init__(f'Probability must lie in [0, 1] (got {probability})')


def _check_rate(arrival_rate: float):
    if not (arrival_rate > 0) or math.isinf(arrival_rate):
        raise InvalidArrivalRateException(arrival_rate)


class EnergyModel:
    """
    Closed-form energy model of a dual-mode EEE interface that coalesces frames. The Fast-Wake, Deep-Sleep and
    transition period lengths are derived for Poisson arrivals; the arrival window of every cycle opens when the
    buffer empties (start of the Active to Fast-Wake transition). The optional maximum dwell time of the
    coalescing config is not part of the model and is ignored here.

    All methods are pure functions of their arguments.
    """

    @staticmethod
    def p_deep(profile: PhyProfile, cfg: CoalescingConfig, arrival_rate: float) -> float:
        """
        Probability that fewer than Q_f frames arrive during T_AtoF + T_idle, i.e. that the cycle reaches Deep-Sleep.

        :param profile:      PHY constants.
        :type profile:       PhyProfile
        :param cfg:          Coalescing thresholds.
        :type cfg:           CoalescingConfig
        :param arrival_rate: Poisson arrival rate in frames per second.
        :type arrival_rate:  float

        :raises InvalidArrivalRateException: Raised if the arrival rate is not positive.

        :return: R(Q_f, lambda * (T_AtoF + T_idle)).
        :rtype:  float
        """
        _check_rate(arrival_rate)
        return regularized_upper_gamma(cfg.q_fast, arrival_rate * profile.t_sleep_window)

    @staticmethod
    def expected_fast_wake(profile: PhyProfile, cfg: CoalescingConfig, arrival_rate: float) -> float:
        """
        Mean Fast-Wake period per cycle. The Q_f-th arrival is Erlang-Q_f distributed from the cycle start; Fast-Wake
        lasts from the end of AtoF until that arrival or until the idle timer expires.

        :param profile:      PHY constants.
        :type profile:       PhyProfile
        :param cfg:          Coalescing thresholds.
        :type cfg:           CoalescingConfig
        :param arrival_rate: Poisson arrival rate in frames per second.
        :type arrival_rate:  float

        :raises InvalidArrivalRateException: Raised if the arrival rate is not positive.

        :return: E[T_f] in seconds, within [0, T_idle].
        :rtype:  float
        """
        _check_rate(arrival_rate)
        q = cfg.q_fast
        x_atof = arrival_rate * profile.t_atof
        x_window = arrival_rate * profile.t_sleep_window

        e_tf = (
            q * (regularized_upper_gamma(q + 1, x_atof) - regularized_upper_gamma(q + 1, x_window)) / arrival_rate
            - profile.t_atof * regularized_upper_gamma(q, x_atof)
            + profile.t_sleep_window * regularized_upper_gamma(q, x_window)
        )

        # Cancellation may push the result a few ulps outside its range.
        return min(max(e_tf, 0.0), profile.t_idle)

    @staticmethod
    def expected_deep_sleep(profile: PhyProfile, cfg: CoalescingConfig, arrival_rate: float) -> float:
        """
        Mean Deep-Sleep period per cycle. With i < Q_f frames buffered at timer expiry, the interface sleeps until
        Q_d - i more frames arrived, minus the T_FtoD transition that starts the wait.

        :param profile:      PHY constants.
        :type profile:       PhyProfile
        :param cfg:          Coalescing thresholds.
        :type cfg:           CoalescingConfig
        :param arrival_rate: Poisson arrival rate in frames per second.
        :type arrival_rate:  float

        :raises InvalidArrivalRateException: Raised if the arrival rate is not positive.

        :return: E[T_d] in seconds.
        :rtype:  float
        """
        _check_rate(arrival_rate)
        x_window = arrival_rate * profile.t_sleep_window
        x_ftod = arrival_rate * profile.t_ftod
        e_td = 0.0

        for i in range(cfg.q_fast):
            remaining = cfg.q_deep - i
            wait = (
                remaining * regularized_upper_gamma(remaining + 1, x_ftod) / arrival_rate
                - profile.t_ftod * regularized_upper_gamma(remaining, x_ftod)
            )
            e_td += poisson_pmf(i, x_window) * max(wait, 0.0)
        return e_td

    @staticmethod
    def expected_transition(profile: PhyProfile, p_deep: float) -> float:
        """
        Mean time spent in transitions per cycle.

        :param profile: PHY constants.
        :type profile:  PhyProfile
        :param p_deep:  Probability that the cycle reaches Deep-Sleep.
        :type p_deep:   float

        :raises InvalidProbabilityException: Raised if p_deep is outside [0, 1].

        :return: T_AtoF + (T_FtoD + T_DtoA) * p_deep + T_FtoA * (1 - p_deep) in seconds.
        :rtype:  float
        """
        if not (0 <= p_deep <= 1):
            raise InvalidProbabilityException(p_deep)
        return profile.t_atof + (profile.t_ftod + profile.t_dtoa) * p_deep + profile.t_ftoa * (1 - p_deep)

    @staticmethod
    def assemble_breakdown(profile: PhyProfile, rho: float, e_tf: float, e_td: float, p_deep: float) \
        -> ModelBreakdown:
        """
        Turns mean sleeping period lengths and the Deep-Sleep probability into time fractions and the normalized
        power phi. Works for any arrival process that produced the inputs.

        :param profile: PHY constants.
        :type profile:  PhyProfile
        :param rho:     Utilization factor.
        :type rho:      float
        :param e_tf:    E[T_f] in seconds.
        :type e_tf:     float
        :param e_td:    E[T_d] in seconds.
        :type e_td:     float
        :param p_deep:  Probability that a cycle reaches Deep-Sleep.
        :type p_deep:   float

        :raises UnstableLoadException: Raised if rho >= 1.

        :return: Full breakdown.
        :rtype:  ModelBreakdown
        """
        if not (rho < 1):
            raise UnstableLoadException(rho)

        e_ttr = EnergyModel.expected_transition(profile, p_deep)
        inactive = e_tf + e_td + e_ttr
        rho_f = (1 - rho) * e_tf / inactive
        rho_d = (1 - rho) * e_td / inactive
        rho_tr = (1 - rho) * e_ttr / inactive
        phi = 1 - (1 - profile.phi_fast) * rho_f - (1 - profile.phi_deep) * rho_d

        return ModelBreakdown(
            e_tf=e_tf,
            e_td=e_td,
            e_ttr=e_ttr,
            p_deep=p_deep,
            rho=rho,
            rho_f=rho_f,
            rho_d=rho_d,
            rho_tr=rho_tr,
            e_cycle=inactive / (1 - rho),
            phi=phi,
        )

    @staticmethod
    def energy_ratio(profile: PhyProfile, cfg: CoalescingConfig, traffic: TrafficSpec) -> ModelBreakdown:
        """
        Evaluates the model for Poisson traffic.

        :param profile: PHY constants.
        :type profile:  PhyProfile
        :param cfg:     Coalescing thresholds (max_dwell is ignored).
        :type cfg:      CoalescingConfig
        :param traffic: Poisson traffic description.
        :type traffic:  TrafficSpec

        :raises UnsupportedTrafficException: Raised if the traffic is not Poisson.
        :raises UnstableLoadException:       Raised if the utilization is 1 or more.

        :return: Full breakdown including phi.
        :rtype:  ModelBreakdown
        """
        if traffic.kind != TrafficKind.POISSON:
            raise UnsupportedTrafficException(traffic.kind)

        arrival_rate = traffic.arrival_rate
        rho = traffic.utilization(profile.line_rate)

        if not (rho < 1):
            raise UnstableLoadException(rho)

        breakdown = EnergyModel.assemble_breakdown(
            profile,
            rho,
            EnergyModel.expected_fast_wake(profile, cfg, arrival_rate),
            EnergyModel.expected_deep_sleep(profile, cfg, arrival_rate),
            EnergyModel.p_deep(profile, cfg, arrival_rate),
        )
        logger.debug('Model at lambda=%.6g f/s, Q=(%d, %d): phi=%.6f', arrival_rate, cfg.q_fast, cfg.q_deep,
            breakdown.phi)
        return breakdown

    @staticmethod
    def recommended_buffer(profile: PhyProfile, cfg: CoalescingConfig, frame_size: float) -> int:
        """
        Rule-of-thumb buffer size in frames: Q_d plus what the link could carry during the Deep-Sleep wake-up
        (Q_d + mu * T_DtoA), rounded up. The simulator itself models an infinite buffer.

        :param profile:    PHY constants.
        :type profile:     PhyProfile
        :param cfg:        Coalescing thresholds.
        :type cfg:         CoalescingConfig
        :param frame_size: Frame size in bytes.
        :type frame_size:  float

        :return: Buffer size in frames, before any safety margin.
        :rtype:  int
        """
        service_rate = 1 / profile.service_time(frame_size)
        return cfg.q_deep + math.ceil(service_rate * profile.t_dtoa)
