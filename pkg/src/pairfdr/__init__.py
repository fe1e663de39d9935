"""Directional false-discovery-rate control for all-pairs mean comparisons.

The library computes Welch t-statistics for every pair of groups, calibrates
them to p-values with a symmetric reference distribution, applies the
step-up false-discovery-rate procedure, and declares the sign of each
rejected mean difference. A seeded Monte Carlo engine scores the procedure
against known ground truth; an HTTP service and CLI front both.
"""

from .bh import (
    SIGN_NEGATIVE,
    SIGN_NONE,
    SIGN_POSITIVE,
    DecisionSet,
    PairDecision,
    bh_stepup,
    bh_threshold,
    declare_signs,
    sort_pvalues,
    williams_bh,
)
from .calibration import (
    TINY,
    CalibrationPolicy,
    PValueTriple,
    ReferenceDistribution,
    calibrate_pair,
    cdf,
    one_sided_pvalues,
    quantile,
    standard_normal,
    student_t,
    tail,
    two_sided_pvalue,
)
from .groups import (
    DegenerateGroupError,
    DegenerateVarianceError,
    GroupSummary,
    PairStatistic,
    pairwise_statistics,
    pairwise_t_arrays,
    summarize_group,
    welch_t,
)
from .metrics import (
    DiagnosticsReport,
    ExperimentSummary,
    GroundTruth,
    PairPartition,
    ReplicationMetrics,
    aggregate_experiment,
    assumption_diagnostics,
    classify_pairs,
    count_directional_errors,
    dfdp,
    dfdp_bound,
    threshold_bound_indicator,
    threshold_lower_bound,
)
from .simulation import (
    CellSummary,
    ReplicationResult,
    SimulationConfig,
    generate_dataset,
    replication_rng,
    run_experiment,
    run_replication,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # groups
    "DegenerateGroupError",
    "DegenerateVarianceError",
    "GroupSummary",
    "PairStatistic",
    "summarize_group",
    "welch_t",
    "pairwise_statistics",
    "pairwise_t_arrays",
    # calibration
    "TINY",
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
    # step-up
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
    # metrics
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
    # simulation
    "SimulationConfig",
    "ReplicationResult",
    "CellSummary",
    "replication_rng",
    "generate_dataset",
    "run_replication",
    "run_experiment",
]
