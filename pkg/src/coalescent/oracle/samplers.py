from __future__ import annotations
from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional, Tuple

import numpy as np


class InvalidSamplerException(Exception):
    def __init__(self, reason: str):
        super().__init__(f'Invalid interarrival sampler: {reason}')


class SamplerKind(str, Enum):
    """
    Enum of the interarrival distributions the oracle can be run with.
    """
    EXPONENTIAL = 'exponential'
    DETERMINISTIC = 'deterministic'
    UNIFORM = 'uniform'


class InterarrivalSampler(ABC):
    """
    Abstract class that acts as the base for all interarrival samplers used by the renewal oracle. A sampler
    provides the empty period T_e (cycle start until the first arrival) and the gaps I between later arrivals.
    Implementations must not keep state between calls; all randomness comes from the generator passed in.
    """

    @abstractmethod
    def draw_empty(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """
        Draws empty-period samples.

        :param rng:  Random generator.
        :type rng:   np.random.Generator
        :param size: Number of samples.
        :type size:  int

        :return: Array of shape (size,) with non-negative durations in seconds.
        :rtype:  np.ndarray
        """
        pass

    @abstractmethod
    def draw_gaps(self, rng: np.random.Generator, shape: Tuple[int, int]) -> np.ndarray:
        """
        Draws interarrival samples.

        :param rng:   Random generator.
        :type rng:    np.random.Generator
        :param shape: Output shape (cycles, gaps per cycle).
        :type shape:  Tuple[int, int]

        :return: Array of non-negative durations in seconds.
        :rtype:  np.ndarray
        """
        pass

    @abstractmethod
    def mean_gap(self) -> float:
        """
        Returns the mean interarrival time (1 / lambda).
        """
        pass


class ExponentialSampler(InterarrivalSampler):
    """
    Poisson arrivals. By memorylessness the empty period is exponential with the same rate as the gaps.
    """

    def __init__(self, arrival_rate: float):
        if not (arrival_rate > 0):
            raise InvalidSamplerException(f'arrival rate must be positive (got {arrival_rate})')
        self.arrival_rate = arrival_rate

    def draw_empty(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.exponential(1 / self.arrival_rate, size)

    def draw_gaps(self, rng: np.random.Generator, shape: Tuple[int, int]) -> np.ndarray:
        return rng.exponential(1 / self.arrival_rate, shape)

    def mean_gap(self) -> float:
        return 1 / self.arrival_rate


class DeterministicSampler(InterarrivalSampler):
    """
    Constant gaps. The empty period defaults to the gap length.
    """

    def __init__(self, gap: float, empty: Optional[float] = None):
        if not (gap >= 0) or (empty is not None and not (empty >= 0)):
            raise InvalidSamplerException(f'durations must not be negative (got gap={gap}, empty={empty})')
        self.gap = gap
        self.empty = gap if empty is None else empty

    def draw_empty(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, self.empty, dtype=np.float64)

    def draw_gaps(self, rng: np.random.Generator, shape: Tuple[int, int]) -> np.ndarray:
        return np.full(shape, self.gap, dtype=np.float64)

    def mean_gap(self) -> float:
        return self.gap


class UniformSampler(InterarrivalSampler):
    """
    Gaps uniform on [low, high]. The empty period is drawn from the same distribution unless a separate range is
    given, since the caller decides how the empty period relates to the gaps.
    """

    def __init__(self, low: float, high: float, empty_range: Optional[Tuple[float, float]] = None):
        if not (0 <= low <= high):
            raise InvalidSamplerException(f'range must satisfy 0 <= low <= high (got [{low}, {high}])')
        self.low = low
        self.high = high
        self.empty_range = empty_range if empty_range else (low, high)

    def draw_empty(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self.empty_range[0], self.empty_range[1], size)

    def draw_gaps(self, rng: np.random.Generator, shape: Tuple[int, int]) -> np.ndarray:
        return rng.uniform(self.low, self.high, shape)

    def mean_gap(self) -> float:
        return (self.low + self.high) / 2


def create_sampler(kind: SamplerKind, arrival_rate: float) -> InterarrivalSampler:
    """
    Creates a sampler with mean gap 1 / arrival_rate. Deterministic gaps use the gap as empty period, uniform gaps
    are drawn from [0, 2 / arrival_rate] for the empty period as well.

    :param kind:         Interarrival distribution.
    :type kind:          SamplerKind
    :param arrival_rate: Mean arrival rate in frames per second.
    :type arrival_rate:  float

    :raises InvalidSamplerException: Raised if the rate is not positive or the kind is unknown.

    :return: Stateless sampler.
    :rtype:  InterarrivalSampler
    """
    if not (arrival_rate > 0):
        raise InvalidSamplerException(f'arrival rate must be positive (got {arrival_rate})')
    if kind == SamplerKind.EXPONENTIAL:
        return ExponentialSampler(arrival_rate)
    if kind == SamplerKind.DETERMINISTIC:
        return DeterministicSampler(1 / arrival_rate)
    if kind == SamplerKind.UNIFORM:
        return UniformSampler(0.0, 2 / arrival_rate)
    raise InvalidSamplerException(f'unknown kind {kind}')
