from enum import Enum


class PhyState(str, Enum):
    """
    Enum of all PHY states of a dual-mode EEE interface.
    """
    ACTIVE = 'active'
    ATOF = 'atof'
    FAST_WAKE = 'fast_wake'
    FTOD = 'ftod'
    DEEP_SLEEP = 'deep_sleep'
    FTOA = 'ftoa'
    DTOA = 'dtoa'

    @property
    def is_transition(self) -> bool:
        return self in _TRANSITIONS


_TRANSITIONS = frozenset([PhyState.ATOF, PhyState.FTOD, PhyState.FTOA, PhyState.DTOA])
