from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from ..oracle.samplers import SamplerKind
from .coalescing_config import CoalescingConfig
from .phy_profile import PhyProfile

_DEFAULT_LOADS = [load * 1e9 for load in range(2, 39, 4)]  # 2, 6, ..., 38 Gb/s.
_DEFAULT_THRESHOLDS = [(1, 1), (2, 8), (8, 32), (32, 128)]
_DEFAULT_REPETITIONS = 10


class Mode(str, Enum):
    """
    Enum of all experiment modes.
    """
    MODEL = 'model'
    SIM = 'sim'
    BOTH = 'both'
    ORACLE = 'oracle'

    @property
    def runs_model(self) -> bool:
        return self in (Mode.MODEL, Mode.BOTH)

    @property
    def runs_sim(self) -> bool:
        return self in (Mode.SIM, Mode.BOTH)


class OutputFormat(str, Enum):
    """
    Enum of all supported result formats.
    """
    CSV = 'csv'
    JSON = 'json'


class InvalidExperimentException(Exception):
    def __init__(self, reason: str):
        super().__init__(f'Invalid experiment configuration: {reason}')


def _default_seeds() -> List[int]:
    return list(range(1, _DEFAULT_REPETITIONS + 1))


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything an experiment run needs. Loads are in bits per second, times in seconds.
    """
    profile: PhyProfile = field(default_factory=PhyProfile)
    thresholds: List[Tuple[int, int]] = field(default_factory=lambda: list(_DEFAULT_THRESHOLDS))
    """
    (Q_f, Q_d) pairs to evaluate.
    """
    loads: List[float] = field(default_factory=lambda: list(_DEFAULT_LOADS))
    frame_size: int = 1500
    horizon: float = 1.0
    """
    Simulated time per run.
    """
    seeds: List[int] = field(default_factory=_default_seeds)
    """
    One simulation run per seed; the first seed also drives the renewal oracle.
    """
    output_format: OutputFormat = OutputFormat.CSV
    mode: Mode = Mode.BOTH
    max_dwell: Optional[float] = None
    rate_scale: float = 1.0
    """
    Time scale applied to trace timestamps.
    """
    oracle_cycles: int = 1_000_000
    oracle_sampler: SamplerKind = SamplerKind.EXPONENTIAL
    """
    Interarrival distribution of the oracle rows (validate always compares exponential estimates).
    """
    tolerance: float = 0.015
    """
    Largest accepted |phi_model - phi_sim| in validation.
    """
    z_limit: float = 4.0
    """
    Largest accepted |z| of a renewal-oracle estimate against the closed form in validation.
    """
    jobs: int = 1
    """
    Worker processes for simulation runs.
    """

    def __post_init__(self):
        """
        Validates the experiment. Thresholds are turned into CoalescingConfig instances here so that invalid pairs
        fail before any run starts.

        :raises InvalidExperimentException: Raised on empty lists or non-positive numeric settings.
        :raises ThresholdOrderException:    Raised if a pair has Q_f > Q_d.
        :raises InvalidThresholdException:  Raised if a threshold is below 1.
        :raises InvalidMaxDwellException:   Raised if max_dwell is not positive.
        """
        if not self.thresholds:
            raise InvalidExperimentException('at least one threshold pair is required')
        if not self.loads:
            raise InvalidExperimentException('at least one load is required')
        if any(not (load > 0) for load in self.loads):
            raise InvalidExperimentException('loads must be positive')
        if not self.seeds:
            raise InvalidExperimentException('at least one seed (repetition) is required')
        if len(set(self.seeds)) != len(self.seeds):
            raise InvalidExperimentException('seeds must be distinct')
        if not (self.frame_size > 0):
            raise InvalidExperimentException('frame size must be positive')
        if not (self.horizon > 0):
            raise InvalidExperimentException('horizon must be positive')
        if not (self.rate_scale > 0):
            raise InvalidExperimentException('rate scale must be positive')
        if self.oracle_cycles < 1:
            raise InvalidExperimentException('oracle cycles must be at least 1')
        if not (self.tolerance >= 0) or not (self.z_limit > 0):
            raise InvalidExperimentException('tolerance must be >= 0 and z limit > 0')
        if self.jobs < 1:
            raise InvalidExperimentException('jobs must be at least 1')
        self.coalescing_configs()

    @property
    def repetitions(self) -> int:
        return len(self.seeds)

    def coalescing_configs(self) -> List[CoalescingConfig]:
        """
        Returns one CoalescingConfig per threshold pair, sharing the experiment's max_dwell.
        """
        return [CoalescingConfig(q_fast, q_deep, self.max_dwell) for q_fast, q_deep in self.thresholds]
