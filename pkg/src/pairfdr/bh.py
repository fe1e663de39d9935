"""Benjamini-Hochberg step-up with directional sign declarations."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence, Union

import numpy as np

from .calibration import CalibrationPolicy
from .groups import GroupSummary, PairStatistic, pairwise_statistics

__all__ = [
    "SIGN_POSITIVE",
    "SIGN_NEGATIVE",
    "SIGN_NONE",
    "PairDecision",
    "DecisionSet",
    "sort_pvalues",
    "bh_stepup",
    "bh_threshold",
    "declare_signs",
    "williams_bh",
]

Pair = tuple[int, int]

SIGN_POSITIVE = "positive"
SIGN_NEGATIVE = "negative"
SIGN_NONE = "none"


@dataclass(frozen=True)
class PairDecision:
    pair: Pair
    rejected: bool
    declared_sign: str


@dataclass(frozen=True)
class DecisionSet:
    """Outcome of the step-up procedure at level ``alpha``.

    ``k_hat`` is the number of rejections (0 means none) and
    ``threshold_alpha_hat`` the equivalent data-driven cutoff
    ``alpha * k_hat / q``: the rejected pairs are exactly those whose
    two-sided p-value is at or below it.
    """

    alpha: float
    k_hat: int
    threshold_alpha_hat: float
    decisions: tuple[PairDecision, ...]

    @property
    def q(self) -> int:
        return len(self.decisions)

    def rejected_pairs(self) -> list[Pair]:
        return [d.pair for d in self.decisions if d.rejected]


def sort_pvalues(pvalues: Iterable[tuple[Pair, float]]) -> list[tuple[Pair, float]]:
    """Ascending by p-value, ties broken by lexicographic pair index."""
    entries = [(tuple(pair), float(p)) for pair, p in pvalues]
    entries.sort(key=lambda entry: (entry[1], entry[0]))
    return entries


def _stepup_k(sorted_p: np.ndarray, alpha: float) -> int:
    # max{k : p_(k) <= k * alpha / q}, or 0 when that set is empty
    q = sorted_p.size
    hits = np.nonzero(sorted_p <= alpha * np.arange(1, q + 1) / q)[0]
    return int(hits[-1]) + 1 if hits.size else 0


def bh_stepup(pvalues: Iterable[tuple[Pair, float]], alpha: float) -> DecisionSet:
    """Step-up rule over two-sided p-values; signs are left undeclared.

    Decisions come back in input order. All pairs whose p-value ties the
    boundary order statistic are rejected together (the boundary tie cannot
    straddle ``k_hat``, so exactly ``k_hat`` pairs are rejected).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    items = [(tuple(pair), float(p)) for pair, p in pvalues]
    if not items:
        raise ValueError("need at least one p-value")
    ps = np.array([p for _, p in items])
    if ((ps < 0.0) | (ps > 1.0)).any():
        raise ValueError("p-values must lie in [0, 1]")
    sorted_p = np.array([p for _, p in sort_pvalues(items)])
    k_hat = _stepup_k(sorted_p, alpha)
    if k_hat:
        rejected = ps <= sorted_p[k_hat - 1]
        alpha_hat = alpha * k_hat / len(items)
    else:
        rejected = np.zeros(len(items), dtype=bool)
        alpha_hat = 0.0
    decisions = tuple(
        PairDecision(pair=pair, rejected=bool(rej), declared_sign=SIGN_NONE)
        for (pair, _), rej in zip(items, rejected)
    )
    return DecisionSet(alpha=alpha, k_hat=k_hat, threshold_alpha_hat=alpha_hat, decisions=decisions)


def bh_threshold(pvalues: Iterable[tuple[Pair, float]], alpha: float) -> float:
    """Largest fixed point of ``a -> (alpha/q) * #{p <= a}`` on [0, 1].

    Equals ``alpha * k_hat / q`` from :func:`bh_stepup` (0 when nothing is
    rejected).
    """
    return bh_stepup(pvalues, alpha).threshold_alpha_hat


def declare_signs(decisions: DecisionSet, stats: Sequence[PairStatistic]) -> DecisionSet:
    """Attach sign declarations to rejected pairs from their t-statistics."""
    t_by_pair = {s.pair: s.t for s in stats}
    if set(t_by_pair) != {d.pair for d in decisions.decisions}:
        raise ValueError("decisions and statistics must cover the same pairs")
    updated = []
    for d in decisions.decisions:
        if not d.rejected:
            updated.append(replace(d, declared_sign=SIGN_NONE))
            continue
        t = t_by_pair[d.pair]
        if t == 0.0:
            # t == 0 forces p == 1, which the step-up can never reject at alpha < 1
            raise RuntimeError(f"pair {d.pair} rejected with t == 0")
        updated.append(replace(d, declared_sign=SIGN_POSITIVE if t > 0.0 else SIGN_NEGATIVE))
    return replace(decisions, decisions=tuple(updated))


def williams_bh(
    groups: Sequence[GroupSummary],
    alpha: float,
    calibration: Union[str, CalibrationPolicy] = "normal",
) -> DecisionSet:
    """Full pipeline: pairwise t-statistics, p-values, step-up, sign declarations."""
    stats = pairwise_statistics(groups)
    if isinstance(calibration, CalibrationPolicy):
        policy = calibration
    else:
        policy = CalibrationPolicy(calibration, group_sizes=tuple(g.size for g in groups))
    ii = np.array([s.i for s in stats])
    jj = np.array([s.j for s in stats])
    t = np.array([s.t for s in stats])
    p_two = policy.two_sided_array(t, ii, jj)
    decisions = bh_stepup([(s.pair, p) for s, p in zip(stats, p_two)], alpha)
    return declare_signs(decisions, stats)
