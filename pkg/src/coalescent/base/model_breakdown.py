from dataclasses import dataclass


@dataclass(frozen=True)
class ModelBreakdown:
    """
    Result of the analytical energy model for one operating point. Durations are in seconds, all other values are
    fractions.
    """
    e_tf: float
    """
    Mean Fast-Wake period per cycle, E[T_f].
    """
    e_td: float
    """
    Mean Deep-Sleep period per cycle, E[T_d].
    """
    e_ttr: float
    """
    Mean time spent transitioning per cycle, E[T_tr].
    """
    p_deep: float
    """
    Probability that a cycle reaches Deep-Sleep.
    """
    rho: float
    """
    Utilization factor, also the fraction of time spent transmitting.
    """
    rho_f: float
    """
    Fraction of time in Fast-Wake.
    """
    rho_d: float
    """
    Fraction of time in Deep-Sleep.
    """
    rho_tr: float
    """
    Fraction of time transitioning between states.
    """
    e_cycle: float
    """
    Mean coalescing cycle length, E[T_cycle].
    """
    phi: float
    """
    Mean power relative to an always-active interface.
    """

    @property
    def rho_on(self) -> float:
        return self.rho
