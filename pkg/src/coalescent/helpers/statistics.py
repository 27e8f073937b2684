from __future__ import annotations
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import stats

_CONFIDENCE = 0.95


class RunningMoments:
    """
    Accumulates count, mean and sum of squared deviations over batches (Chan et al. pairwise update), so chunked
    sampling gives the same moments as one large array up to rounding.
    """

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self._m2 = 0.0

    def update(self, batch: np.ndarray) -> RunningMoments:
        n = batch.size

        if n == 0:
            return self
        first = float(batch.flat[0])

        # Constant batches have exactly zero spread.
        if np.all(batch == first):
            batch_mean, batch_m2 = first, 0.0
        else:
            batch_mean = float(np.mean(batch))
            batch_m2 = float(np.sum((batch - batch_mean) ** 2))

        if self.count == 0:
            self.mean, self._m2, self.count = batch_mean, batch_m2, n
            return self
        total = self.count + n
        delta = batch_mean - self.mean

        if delta != 0.0:
            self.mean += delta * n / total
            self._m2 += delta * delta * self.count * n / total
        self._m2 += batch_m2
        self.count = total
        return self

    @property
    def variance(self) -> float:
        """
        Unbiased sample variance (0 for fewer than two samples).
        """
        return self._m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def standard_error(self) -> float:
        return math.sqrt(self.variance / self.count) if self.count > 0 else 0.0


def mean_confidence_interval(values: Sequence[float], confidence: float = _CONFIDENCE) \
    -> Tuple[float, Optional[float]]:
    """
    Returns the sample mean and the Student-t confidence interval half-width.

    :param values:     Samples (e.g., one value per simulation seed).
    :type values:      Sequence[float]
    :param confidence: Confidence level, defaults to 0.95
    :type confidence:  float, optional

    :return: Mean and half-width; the half-width is None for fewer than two samples.
    :rtype:  Tuple[float, Optional[float]]
    """
    samples = np.asarray(values, dtype=np.float64)
    mean = float(np.mean(samples))

    if samples.size < 2:
        return mean, None
    sem = float(np.std(samples, ddof=1)) / math.sqrt(samples.size)
    return mean, float(stats.t.ppf((1 + confidence) / 2, samples.size - 1)) * sem
