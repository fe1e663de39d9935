"""Group summary statistics and Welch t-statistics for all-pairs comparisons."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "DegenerateGroupError",
    "DegenerateVarianceError",
    "GroupSummary",
    "PairStatistic",
    "summarize_group",
    "welch_t",
    "pairwise_statistics",
    "pairwise_t_arrays",
]


class DegenerateGroupError(ValueError):
    """Group too small for a sample variance (fewer than 2 observations)."""


class DegenerateVarianceError(ValueError):
    """Both groups of a pair have zero variance, so the t-statistic is undefined."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class GroupSummary:
    """Sufficient statistics of one sample group.

    ``variance`` is the sample variance with divisor ``size - 1``.
    """

    mean: float
    variance: float
    size: int

    def __post_init__(self):
        if self.size < 2:
            raise DegenerateGroupError(f"group size must be >= 2, got {self.size}")
        if not math.isfinite(self.mean):
            raise ValueError(f"group mean must be finite, got {self.mean}")
        if not (math.isfinite(self.variance) and self.variance >= 0.0):
            raise ValueError(f"group variance must be finite and >= 0, got {self.variance}")


@dataclass(frozen=True)
class PairStatistic:
    """Welch t-statistic for the group pair ``(i, j)``, 0-based with ``i < j``."""

    i: int
    j: int
    t: float

    def __post_init__(self):
        if not 0 <= self.i < self.j:
            raise ValueError(f"pair indices must satisfy 0 <= i < j, got ({self.i}, {self.j})")
        if not math.isfinite(self.t):
            raise ValueError(f"t-statistic must be finite, got {self.t}")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.i, self.j)


def summarize_group(samples: Sequence[float]) -> GroupSummary:
    """Reduce one group's raw observations to (mean, sample variance, size)."""
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"samples must be one-dimensional, got shape {x.shape}")
    if x.size < 2:
        raise DegenerateGroupError("need at least 2 observations to estimate a variance")
    if not np.isfinite(x).all():
        raise ValueError("samples must be finite")
    mean = float(np.mean(x))
    sum_sq = float(np.sum((x - mean) ** 2))
    return GroupSummary(mean=mean, variance=sum_sq / (x.size - 1), size=int(x.size))


def welch_t(a: GroupSummary, b: GroupSummary) -> float:
    """Two-sample t-statistic with unpooled variances.

    ``(mean_a - mean_b) / sqrt(var_a/n_a + var_b/n_b)``; antisymmetric in its
    arguments and invariant to a common shift of both means.
    """
    denom = a.variance / a.size + b.variance / b.size
    if denom <= 0.0:
        raise DegenerateVarianceError("both groups have zero variance; t-statistic is undefined")
    return (a.mean - b.mean) / math.sqrt(denom)


def pairwise_statistics(groups: Sequence[GroupSummary]) -> list[PairStatistic]:
    """Welch t-statistics for all m(m-1)/2 pairs, in lexicographic (i, j) order."""
    if len(groups) < 2:
        raise ValueError(f"need at least 2 groups, got {len(groups)}")
    stats = []
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            try:
                t = welch_t(groups[i], groups[j])
            except DegenerateVarianceError:
                raise DegenerateVarianceError(
                    f"groups {i} and {j} both have zero variance; t-statistic is undefined",
                    pair=(i, j),
                ) from None
            stats.append(PairStatistic(i=i, j=j, t=t))
    return stats


def pairwise_t_arrays(means, variances, sizes) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized all-pairs Welch t-statistics.

    Returns ``(ii, jj, t)`` arrays in lexicographic pair order; bitwise
    identical to looping :func:`welch_t` over the pairs.
    """
    means = np.asarray(means, dtype=float)
    variances = np.asarray(variances, dtype=float)
    sizes = np.asarray(sizes)
    if means.size < 2:
        raise ValueError(f"need at least 2 groups, got {means.size}")
    ii, jj = np.triu_indices(means.size, k=1)
    denom = variances[ii] / sizes[ii] + variances[jj] / sizes[jj]
    bad = np.nonzero(denom <= 0.0)[0]
    if bad.size:
        i, j = int(ii[bad[0]]), int(jj[bad[0]])
        raise DegenerateVarianceError(
            f"groups {i} and {j} both have zero variance; t-statistic is undefined",
            pair=(i, j),
        )
    return ii, jj, (means[ii] - means[jj]) / np.sqrt(denom)
