"""Reference distributions and p-value calibration for pairwise t-statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from .groups import PairStatistic

__all__ = [
    "TINY",
    "STANDARD_NORMAL",
    "STUDENT_T",
    "ReferenceDistribution",
    "standard_normal",
    "student_t",
    "PValueTriple",
    "CalibrationPolicy",
    "cdf",
    "tail",
    "quantile",
    "one_sided_pvalues",
    "two_sided_pvalue",
    "calibrate_pair",
]

#: Smallest positive double. One-sided p-values are clamped here instead of
#: underflowing to exactly zero for extreme statistics; the clamp can never
#: change a rejection at any practical level.
TINY = math.nextafter(0.0, 1.0)

#: Tolerance for the complementarity check p_lower + p_upper == 1.
COMPLEMENT_TOL = 1e-12

STANDARD_NORMAL = "standard_normal"
STUDENT_T = "student_t"


@dataclass(frozen=True)
class ReferenceDistribution:
    """Symmetric null distribution used to convert t-statistics to p-values."""

    kind: str
    degrees_of_freedom: Optional[int] = None

    def __post_init__(self):
        if self.kind == STANDARD_NORMAL:
            if self.degrees_of_freedom is not None:
                raise ValueError("degrees_of_freedom only applies to student_t")
        elif self.kind == STUDENT_T:
            if self.degrees_of_freedom is None or self.degrees_of_freedom < 1:
                raise ValueError("student_t requires degrees_of_freedom >= 1")
        else:
            raise ValueError(f"unknown distribution kind: {self.kind!r}")


def standard_normal() -> ReferenceDistribution:
    return ReferenceDistribution(STANDARD_NORMAL)


def student_t(degrees_of_freedom: int) -> ReferenceDistribution:
    return ReferenceDistribution(STUDENT_T, degrees_of_freedom)


def _student_tail(x, df):
    # Upper-tail probability via the regularized incomplete beta function,
    # evaluated at |x| so extreme statistics keep full relative accuracy.
    x = np.asarray(x, dtype=float)
    df = np.asarray(df, dtype=float)
    half_tail = 0.5 * special.betainc(0.5 * df, 0.5, df / (df + x * x))
    return np.where(x >= 0.0, half_tail, 1.0 - half_tail)


def tail(dist: ReferenceDistribution, x):
    """Survival function ``1 - F(x)``. Accepts scalars or arrays."""
    xs = np.asarray(x, dtype=float)
    if not np.isfinite(xs).all():
        raise ValueError("x must be finite")
    if dist.kind == STANDARD_NORMAL:
        out = special.ndtr(-xs)
    else:
        out = _student_tail(xs, float(dist.degrees_of_freedom))
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


def cdf(dist: ReferenceDistribution, x):
    """Distribution function ``F(x)``; by symmetry equal to ``tail(-x)``."""
    return tail(dist, np.negative(np.asarray(x, dtype=float)))


def quantile(dist: ReferenceDistribution, p):
    """Inverse distribution function; requires ``0 < p < 1``."""
    ps = np.asarray(p, dtype=float)
    if not ((ps > 0.0) & (ps < 1.0)).all():
        raise ValueError("p must lie strictly between 0 and 1")
    if dist.kind == STANDARD_NORMAL:
        out = special.ndtri(ps)
    else:
        out = special.stdtrit(dist.degrees_of_freedom, ps)
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PValueTriple:
    """Lower-, upper-, and two-sided p-values for one pair."""

    p_lower: float
    p_upper: float
    p_two_sided: float

    def __post_init__(self):
        if abs(self.p_lower + self.p_upper - 1.0) > COMPLEMENT_TOL:
            raise ValueError("one-sided p-values must be complementary (sum to 1)")
        if not 0.0 <= self.p_two_sided <= 1.0:
            raise ValueError(f"two-sided p-value must lie in [0, 1], got {self.p_two_sided}")


def one_sided_pvalues(t: float, dist: ReferenceDistribution) -> tuple[float, float]:
    """``(p_lower, p_upper) = (F(t), 1 - F(t))`` for a single statistic.

    Both tails are evaluated through the survival function, so
    ``one_sided_pvalues(t)[0] == one_sided_pvalues(-t)[1]`` holds exactly.
    """
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t}")
    p_upper = max(float(tail(dist, t)), TINY)
    p_lower = max(float(tail(dist, -t)), TINY)
    return p_lower, p_upper


def two_sided_pvalue(p_lower: float, p_upper: float) -> float:
    """Two-sided p-value ``2 * min(p_lower, p_upper)`` from a complementary pair."""
    if not (0.0 <= p_lower <= 1.0 and 0.0 <= p_upper <= 1.0):
        raise ValueError("one-sided p-values must lie in [0, 1]")
    if abs(p_lower + p_upper - 1.0) > COMPLEMENT_TOL:
        raise ValueError("one-sided p-values must be complementary (sum to 1)")
    return min(1.0, 2.0 * min(p_lower, p_upper))


@dataclass(frozen=True)
class CalibrationPolicy:
    """Rule mapping each pair to its reference distribution.

    ``"normal"`` uses the standard normal for every pair; ``"student_t"``
    uses a t-distribution with ``min(n_i, n_j) - 1`` degrees of freedom and
    therefore needs the per-group sample sizes.
    """

    kind: str = "normal"
    group_sizes: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in ("normal", "student_t"):
            raise ValueError(f"calibration must be 'normal' or 'student_t', got {self.kind!r}")
        if self.group_sizes is not None:
            object.__setattr__(self, "group_sizes", tuple(int(n) for n in self.group_sizes))
        elif self.kind == "student_t":
            raise ValueError("student_t calibration requires group sizes")

    def distribution_for(self, i: int, j: int) -> ReferenceDistribution:
        if self.kind == "normal":
            return standard_normal()
        df = min(self.group_sizes[i], self.group_sizes[j]) - 1
        if df < 1:
            raise ValueError(f"pair ({i}, {j}) needs min group size >= 2 for student_t")
        return student_t(df)

    def two_sided_array(self, t, ii, jj) -> np.ndarray:
        """Vectorized two-sided p-values for statistic array ``t`` over pairs
        ``(ii[k], jj[k])``; bitwise equal to :func:`calibrate_pair` per pair."""
        abs_t = np.abs(np.asarray(t, dtype=float))
        if self.kind == "normal":
            tl = special.ndtr(-abs_t)
        else:
            sizes = np.asarray(self.group_sizes)
            dfs = np.minimum(sizes[ii], sizes[jj]) - 1
            if (dfs < 1).any():
                raise ValueError("student_t calibration needs min group size >= 2")
            tl = _student_tail(abs_t, dfs.astype(float))
        return np.minimum(1.0, 2.0 * np.maximum(tl, TINY))


def calibrate_pair(stat: PairStatistic, policy: CalibrationPolicy) -> PValueTriple:
    """One- and two-sided p-values of one pair under the policy's distribution."""
    dist = policy.distribution_for(stat.i, stat.j)
    p_lower, p_upper = one_sided_pvalues(stat.t, dist)
    return PValueTriple(p_lower, p_upper, two_sided_pvalue(p_lower, p_upper))
