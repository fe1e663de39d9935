"""Ground-truth classification, directional-error accounting, and diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bh import SIGN_NEGATIVE, SIGN_POSITIVE, DecisionSet, Pair
from .calibration import standard_normal, tail

__all__ = [
    "GroundTruth",
    "PairPartition",
    "ReplicationMetrics",
    "ExperimentSummary",
    "DiagnosticsReport",
    "classify_pairs",
    "count_directional_errors",
    "dfdp",
    "dfdp_bound",
    "aggregate_experiment",
    "assumption_diagnostics",
    "threshold_lower_bound",
    "threshold_bound_indicator",
]


@dataclass
class GroundTruth:
    """True per-group means, standard deviations, and sample sizes."""

    means: np.ndarray
    scales: np.ndarray
    sizes: np.ndarray

    def __post_init__(self):
        self.means = np.asarray(self.means, dtype=float)
        self.scales = np.asarray(self.scales, dtype=float)
        self.sizes = np.asarray(self.sizes, dtype=int)
        if self.means.ndim != 1 or self.means.size < 2:
            raise ValueError("need at least 2 groups")
        if not (self.means.shape == self.scales.shape == self.sizes.shape):
            raise ValueError("means, scales, and sizes must have equal lengths")
        if not (self.scales > 0.0).all():
            raise ValueError("scales must be positive")
        if (self.sizes < 1).any():
            raise ValueError("sizes must be positive")

    @property
    def m(self) -> int:
        return self.means.size


@dataclass(frozen=True)
class PairPartition:
    """Disjoint split of all pairs by the sign of the true mean difference."""

    h_zero: frozenset[Pair]
    h_plus: frozenset[Pair]
    h_minus: frozenset[Pair]

    @property
    def q0(self) -> int:
        return len(self.h_zero)

    @property
    def q_plus(self) -> int:
        return len(self.h_plus)

    @property
    def q_minus(self) -> int:
        return len(self.h_minus)

    @property
    def q(self) -> int:
        return self.q0 + self.q_plus + self.q_minus


@dataclass(frozen=True)
class ReplicationMetrics:
    """Rejection and directional-error counts of one replication."""

    rejections: int
    directional_errors: int
    dfdp: float

    def __post_init__(self):
        if not 0 <= self.directional_errors <= self.rejections:
            raise ValueError("need 0 <= directional_errors <= rejections")
        if not 0.0 <= self.dfdp <= 1.0:
            raise ValueError(f"dfdp must lie in [0, 1], got {self.dfdp}")


@dataclass(frozen=True)
class ExperimentSummary:
    """Monte Carlo aggregates of per-replication directional error rates."""

    reps: int
    bound: float
    dfdr_hat: float
    dfdr_se: float
    p_dfdp_le_bound: float
    p_se: float


@dataclass(frozen=True)
class DiagnosticsReport:
    """Empirical balance constants and the standardized-gap signal check."""

    alpha: float
    c_lower: float
    c_upper: float
    signal_threshold: float
    signal_pair_count: int
    signal_condition_met: bool


def classify_pairs(truth: GroundTruth) -> PairPartition:
    """Assign each pair (i, j), i < j, by the sign of ``means[i] - means[j]``."""
    zero, plus, minus = set(), set(), set()
    means = truth.means
    for i in range(truth.m):
        for j in range(i + 1, truth.m):
            diff = means[i] - means[j]
            (plus if diff > 0.0 else minus if diff < 0.0 else zero).add((i, j))
    return PairPartition(frozenset(zero), frozenset(plus), frozenset(minus))


def count_directional_errors(decisions: DecisionSet, partition: PairPartition) -> int:
    """Count rejections that are directional errors.

    A rejected pair errs when its true mean difference is zero, or when the
    declared sign contradicts the true difference.
    """
    count = 0
    for d in decisions.decisions:
        if not d.rejected:
            continue
        if d.pair in partition.h_zero:
            count += 1
        elif d.pair in partition.h_plus:
            count += d.declared_sign == SIGN_NEGATIVE
        elif d.pair in partition.h_minus:
            count += d.declared_sign == SIGN_POSITIVE
        else:
            raise ValueError(f"pair {d.pair} missing from the ground-truth partition")
    return count


def dfdp(directional_errors: int, rejections: int) -> float:
    """Directional false discovery proportion; 0 by convention when R == 0."""
    if rejections < 0 or not 0 <= directional_errors <= max(rejections, 0):
        raise ValueError("need 0 <= directional_errors <= rejections")
    return directional_errors / rejections if rejections else 0.0


def dfdp_bound(alpha: float, q0: int, q: int) -> float:
    """Theoretical dFDP/dFDR bound ``(alpha/2) * (1 + q0/q)``.

    Reduces to ``alpha/2`` with no true nulls and to ``alpha`` when every
    pair is null.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if q < 1 or not 0 <= q0 <= q:
        raise ValueError("need 0 <= q0 <= q and q >= 1")
    return 0.5 * alpha * (1.0 + q0 / q)


def aggregate_experiment(metrics: Sequence[ReplicationMetrics], bound: float) -> ExperimentSummary:
    """Mean dFDP (the dFDR estimate) and P(dFDP <= bound), with Monte Carlo SEs."""
    if len(metrics) == 0:
        raise ValueError("need at least one replication")
    if not 0.0 < bound < 1.0:
        raise ValueError(f"bound must lie in (0, 1), got {bound}")
    dfdps = np.array([m.dfdp for m in metrics])
    n = dfdps.size
    dfdr_hat = float(dfdps.mean())
    dfdr_se = float(dfdps.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    p_hat = float((dfdps <= bound).mean())
    p_se = math.sqrt(p_hat * (1.0 - p_hat) / n)
    return ExperimentSummary(
        reps=n,
        bound=bound,
        dfdr_hat=dfdr_hat,
        dfdr_se=dfdr_se,
        p_dfdp_le_bound=p_hat,
        p_se=p_se,
    )


def assumption_diagnostics(truth: GroundTruth, alpha: float) -> DiagnosticsReport:
    """Tightest balance constants and the standardized-gap signal count.

    ``c_lower``/``c_upper`` are the extreme variance and size ratios across
    groups; the signal count is the number of pairs whose standardized mean
    gap reaches ``8 * c_upper**2 * sqrt(log m)``. Advisory only: results are
    reported, never enforced.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    variances = truth.scales**2
    sizes = truth.sizes.astype(float)
    c_upper = max(float(variances.max() / variances.min()), float(sizes.max() / sizes.min()))
    c_lower = min(float(variances.min() / variances.max()), float(sizes.min() / sizes.max()))
    ii, jj = np.triu_indices(truth.m, k=1)
    gaps = np.abs(truth.means[ii] - truth.means[jj])
    scale = np.sqrt(variances[ii] / sizes[ii] + variances[jj] / sizes[jj])
    threshold = 8.0 * c_upper**2 * math.sqrt(math.log(truth.m))
    count = int(np.count_nonzero(gaps / scale >= threshold))
    return DiagnosticsReport(
        alpha=alpha,
        c_lower=c_lower,
        c_upper=c_upper,
        signal_threshold=threshold,
        signal_pair_count=count,
        signal_condition_met=count >= 1,
    )


def threshold_lower_bound(m: int) -> float:
    """``2 * (1 - Phi(sqrt(2 log m)))``, the level the data-driven cutoff
    should clear for designs with strong signals."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    return 2.0 * tail(standard_normal(), math.sqrt(2.0 * math.log(m)))


def threshold_bound_indicator(decisions: DecisionSet, m: int) -> bool:
    """Whether the realized cutoff clears :func:`threshold_lower_bound`."""
    return bool(decisions.threshold_alpha_hat >= threshold_lower_bound(m))
