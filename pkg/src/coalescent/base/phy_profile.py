from __future__ import annotations
from dataclasses import dataclass, replace
import math

# Reference 40 Gb/s dual-mode PHY.
_DEFAULT_T_ATOF = 0.90e-6
_DEFAULT_T_FTOA = 0.34e-6
_DEFAULT_T_FTOD = 1.00e-6
_DEFAULT_T_DTOA = 5.50e-6
_DEFAULT_T_IDLE = 3.50e-6
_DEFAULT_LINE_RATE = 40e9
_DEFAULT_PHI_FAST = 0.7
_DEFAULT_PHI_DEEP = 0.1


class NegativeDurationException(Exception):
    def __init__(self, name: str, value: float):
        super().__init__(f'Duration {name} must not be negative (got {value})')


class InvalidLineRateException(Exception):
    def __init__(self, line_rate: float):
        super().__init__(f'Line rate must be positive (got {line_rate})')


class InvalidEfficiencyProfileException(Exception):
    def __init__(self, phi_fast: float, phi_deep: float):
        super().__init__(
            f'Efficiency profile must satisfy 0 <= phi_deep <= phi_fast <= 1 '
            f'(got phi_fast={phi_fast}, phi_deep={phi_deep})'
        )


@dataclass(frozen=True)
class PhyProfile:
    """
    Physical-layer constants of a dual-mode EEE interface. All durations are given in seconds, the line rate in
    bits per second.
    """
    t_atof: float = _DEFAULT_T_ATOF
    """
    Transition time from Active to Fast-Wake.
    """
    t_ftoa: float = _DEFAULT_T_FTOA
    """
    Transition time from Fast-Wake back to Active.
    """
    t_ftod: float = _DEFAULT_T_FTOD
    """
    Transition time from Fast-Wake to Deep-Sleep.
    """
    t_dtoa: float = _DEFAULT_T_DTOA
    """
    Transition time from Deep-Sleep back to Active.
    """
    t_idle: float = _DEFAULT_T_IDLE
    """
    Maximum time spent in Fast-Wake before moving on to Deep-Sleep.
    """
    line_rate: float = _DEFAULT_LINE_RATE
    """
    Transmission rate while active.
    """
    phi_fast: float = _DEFAULT_PHI_FAST
    """
    Power drawn in Fast-Wake as a fraction of the active power.
    """
    phi_deep: float = _DEFAULT_PHI_DEEP
    """
    Power drawn in Deep-Sleep as a fraction of the active power.
    """

    def __post_init__(self):
        """
        Validates the profile.

        :raises NegativeDurationException:         Raised if a transition time or the idle timeout is negative.
        :raises InvalidLineRateException:          Raised if the line rate is not positive.
        :raises InvalidEfficiencyProfileException: Raised if 0 <= phi_deep <= phi_fast <= 1 does not hold.
        """
        for name in ['t_atof', 't_ftoa', 't_ftod', 't_dtoa', 't_idle']:
            value = getattr(self, name)

            if not (value >= 0) or math.isinf(value):
                raise NegativeDurationException(name, value)

        if not (self.line_rate > 0) or math.isinf(self.line_rate):
            raise InvalidLineRateException(self.line_rate)

        if not (0 <= self.phi_deep <= self.phi_fast <= 1):
            raise InvalidEfficiencyProfileException(self.phi_fast, self.phi_deep)

    @property
    def t_sleep_window(self) -> float:
        """
        Time from the start of a cycle (buffer empties) until the idle timer expires (T_AtoF + T_idle). Arrivals
        are counted over this whole window.
        """
        return self.t_atof + self.t_idle

    def service_time(self, frame_size: float) -> float:
        """
        Returns the transmission time of a frame.

        :param frame_size: Frame size in bytes.
        :type frame_size:  float

        :return: Transmission time in seconds.
        :rtype:  float
        """
        return frame_size * 8 / self.line_rate

    def single_mode(self, phi_lpi: float) -> PhyProfile:
        """
        Derives an 802.3az-like single-mode profile: both low-power modes draw the same power and the move to
        Deep-Sleep is instantaneous. This is only a recipe, the simulator and model treat it like any profile.

        :param phi_lpi: Power drawn in the single low-power mode as a fraction of the active power.
        :type phi_lpi:  float

        :return: New profile.
        :rtype:  PhyProfile
        """
        return replace(self, t_ftod=0.0, phi_fast=phi_lpi, phi_deep=phi_lpi)
