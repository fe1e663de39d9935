"""Seeded Monte Carlo engine for the pairwise-comparison experiment grid."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bh import _stepup_k
from .calibration import CalibrationPolicy
from .groups import pairwise_t_arrays
from .metrics import (
    ExperimentSummary,
    GroundTruth,
    ReplicationMetrics,
    aggregate_experiment,
    dfdp,
    threshold_lower_bound,
)

__all__ = [
    "SimulationConfig",
    "ReplicationResult",
    "CellSummary",
    "replication_rng",
    "generate_dataset",
    "run_replication",
    "run_experiment",
]

CALIBRATION_KINDS = ("normal", "student_t")


@dataclass(frozen=True)
class SimulationConfig:
    """One experiment cell: a balanced design with heavy-tailed errors.

    ``effect_size`` is the standard deviation of the normal law generating
    the true group means; 0 makes every pair a true null. Observations are
    ``mu_i + rho_i * eps`` with Student-t errors (``error_df`` degrees of
    freedom) and per-group variance factors ``rho_i**2`` drawn from
    normal(scale_mean, scale_sd), redrawn while non-positive.
    """

    m: int
    n: int
    effect_size: float
    alpha: float = 0.2
    reps: int = 500
    seed: int = 0
    calibration: str = "normal"
    error_df: int = 6
    scale_mean: float = 1.0
    scale_sd: float = 0.1

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not (math.isfinite(self.effect_size) and self.effect_size >= 0.0):
            raise ValueError(f"effect_size must be finite and >= 0, got {self.effect_size}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.calibration not in CALIBRATION_KINDS:
            raise ValueError(f"calibration must be one of {CALIBRATION_KINDS}, got {self.calibration!r}")
        if self.error_df < 1:
            raise ValueError(f"error_df must be >= 1, got {self.error_df}")
        if not math.isfinite(self.scale_mean):
            raise ValueError(f"scale_mean must be finite, got {self.scale_mean}")
        if not (math.isfinite(self.scale_sd) and self.scale_sd >= 0.0):
            raise ValueError(f"scale_sd must be finite and >= 0, got {self.scale_sd}")


@dataclass(frozen=True)
class ReplicationResult:
    """Per-replication outcome; a pure function of (config, replication_index)."""

    metrics: ReplicationMetrics
    alpha_hat: float
    threshold_bound_ok: bool
    seed_used: int
    replication_index: int


@dataclass(frozen=True)
class CellSummary:
    """Aggregates of one experiment cell over all its replications."""

    config: SimulationConfig
    summary: ExperimentSummary
    mean_rejections: float
    mean_alpha_hat: float
    threshold_bound_rate: float


def replication_rng(seed: int, replication_index: int) -> np.random.Generator:
    """Stream for one replication, derived only from (seed, index).

    Streams are independent across indices and unaffected by how replications
    are scheduled, so experiment output is invariant to the worker count.
    """
    if replication_index < 0:
        raise ValueError(f"replication_index must be >= 0, got {replication_index}")
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(replication_index,)))


def generate_dataset(config: SimulationConfig, replication_index: int) -> tuple[GroundTruth, np.ndarray]:
    """Draw one replication's ground truth and raw observations.

    Fixed draw order: group means, variance factors ``rho_i**2`` (redrawn
    while non-positive), then the (m, n) matrix of Student-t errors.
    Returns the truth (scales are ``rho_i * sqrt(df / (df - 2))``, the true
    standard deviation of ``rho_i * eps``) and the (m, n) sample matrix.
    """
    if config.error_df <= 2:
        raise ValueError(f"error_df must be >= 3 for finite error variance, got {config.error_df}")
    rng = replication_rng(config.seed, replication_index)
    mu = rng.normal(0.0, config.effect_size, config.m)
    rho_sq = rng.normal(config.scale_mean, config.scale_sd, config.m)
    while True:
        bad = rho_sq <= 0.0
        if not bad.any():
            break
        rho_sq[bad] = rng.normal(config.scale_mean, config.scale_sd, int(bad.sum()))
    rho = np.sqrt(rho_sq)
    eps = rng.standard_t(config.error_df, (config.m, config.n))
    samples = mu[:, None] + rho[:, None] * eps
    error_sd = math.sqrt(config.error_df / (config.error_df - 2.0))
    truth = GroundTruth(means=mu, scales=rho * error_sd, sizes=np.full(config.m, config.n))
    return truth, samples


def run_replication(config: SimulationConfig, replication_index: int) -> ReplicationResult:
    """Generate data, run the directional step-up, and score it against the truth.

    Works on arrays throughout but is bitwise-identical to summarizing each
    group and running :func:`pairfdr.bh.williams_bh` (the equivalence is
    pinned by tests), which keeps large grids fast.
    """
    truth, samples = generate_dataset(config, replication_index)
    means = samples.mean(axis=1)
    variances = ((samples - means[:, None]) ** 2).sum(axis=1) / (config.n - 1)
    sizes = np.full(config.m, config.n)
    ii, jj, t = pairwise_t_arrays(means, variances, sizes)
    policy = CalibrationPolicy(config.calibration, group_sizes=(config.n,) * config.m)
    p_two = policy.two_sided_array(t, ii, jj)
    sorted_p = np.sort(p_two)
    k_hat = _stepup_k(sorted_p, config.alpha)
    if k_hat:
        alpha_hat = config.alpha * k_hat / p_two.size
        rejected = p_two <= sorted_p[k_hat - 1]
        true_sign = np.sign(truth.means[ii] - truth.means[jj])
        # sign(true diff) is 0 for null pairs, so any rejection of them counts
        errors = int(np.count_nonzero(rejected & (np.sign(t) != true_sign)))
    else:
        alpha_hat = 0.0
        errors = 0
    metrics = ReplicationMetrics(
        rejections=k_hat, directional_errors=errors, dfdp=dfdp(errors, k_hat)
    )
    return ReplicationResult(
        metrics=metrics,
        alpha_hat=alpha_hat,
        threshold_bound_ok=alpha_hat >= threshold_lower_bound(config.m),
        seed_used=config.seed,
        replication_index=replication_index,
    )


def _run_chunk(task: tuple[int, SimulationConfig, int, int]) -> list[ReplicationResult]:
    idx, config, start, stop = task
    return [run_replication(config, r) for r in range(start, stop)]


def run_experiment(configs: Sequence[SimulationConfig], workers: int = 1) -> list[CellSummary]:
    """Run every config's replications and aggregate each cell.

    Aggregation always folds results in replication order, so output is a
    pure function of the configs regardless of ``workers``.
    """
    configs = list(configs)
    if not configs:
        raise ValueError("need at least one configuration")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    per_config: list[list[ReplicationResult]]
    if workers == 1:
        per_config = [[run_replication(c, r) for r in range(c.reps)] for c in configs]
    else:
        tasks = []
        for idx, c in enumerate(configs):
            step = max(1, -(-c.reps // (workers * 4)))
            for start in range(0, c.reps, step):
                tasks.append((idx, c, start, min(start + step, c.reps)))
        per_config = [[] for _ in configs]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for (idx, _, _, _), chunk in zip(tasks, pool.map(_run_chunk, tasks)):
                per_config[idx].extend(chunk)
    cells = []
    for config, results in zip(configs, per_config):
        summary = aggregate_experiment([r.metrics for r in results], bound=config.alpha / 2.0)
        cells.append(
            CellSummary(
                config=config,
                summary=summary,
                mean_rejections=float(np.mean([r.metrics.rejections for r in results])),
                mean_alpha_hat=float(np.mean([r.alpha_hat for r in results])),
                threshold_bound_rate=float(np.mean([r.threshold_bound_ok for r in results])),
            )
        )
    return cells
