"""Pydantic request/response schemas for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..simulation import CellSummary, SimulationConfig


class GroupSummaryModel(BaseModel):
    mean: float
    variance: float = Field(ge=0)
    size: int = Field(ge=2)


class DecisionRequest(BaseModel):
    """Groups may be given as summaries or as raw samples, not both."""

    groups: Optional[list[GroupSummaryModel]] = None
    samples: Optional[list[list[float]]] = None
    alpha: float = Field(default=0.2, gt=0, lt=1)
    calibration: Literal["normal", "student_t"] = "normal"

    @model_validator(mode="after")
    def _exactly_one_input(self):
        if (self.groups is None) == (self.samples is None):
            raise ValueError("provide exactly one of 'groups' or 'samples'")
        n_groups = len(self.groups if self.groups is not None else self.samples)
        if n_groups < 2:
            raise ValueError("need at least 2 groups")
        return self


class PairDecisionModel(BaseModel):
    i: int
    j: int
    t: float
    p_lower: float
    p_upper: float
    p_two_sided: float
    rejected: bool
    declared_sign: Literal["positive", "negative", "none"]


class DecisionResponse(BaseModel):
    alpha: float
    q: int
    k_hat: int
    threshold_alpha_hat: float
    decisions: list[PairDecisionModel]


class DiagnosticsRequest(BaseModel):
    means: list[float] = Field(min_length=2)
    scales: list[float] = Field(min_length=2)
    sizes: list[int] = Field(min_length=2)
    alpha: float = Field(default=0.2, gt=0, lt=1)


class DiagnosticsResponse(BaseModel):
    alpha: float
    c_lower: float
    c_upper: float
    signal_threshold: float
    signal_pair_count: int
    signal_condition_met: bool
    q0: int
    q_plus: int
    q_minus: int


class SimulationConfigModel(BaseModel):
    m: int = Field(ge=2)
    n: int = Field(ge=2)
    effect_size: float = Field(ge=0)
    alpha: float = Field(default=0.2, gt=0, lt=1)
    reps: int = Field(default=500, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    calibration: Literal["normal", "student_t"] = "normal"
    error_df: int = Field(default=6, gt=2)
    scale_mean: float = 1.0
    scale_sd: float = Field(default=0.1, ge=0)

    def to_config(self) -> SimulationConfig:
        return SimulationConfig(**self.model_dump())


class ExperimentRequest(BaseModel):
    configs: list[SimulationConfigModel] = Field(min_length=1)
    workers: int = Field(default=1, ge=1)


class CellSummaryModel(BaseModel):
    """One flat output row per experiment cell (the CSV schema)."""

    m: int
    n: int
    effect_size: float
    alpha: float
    reps: int
    seed: int
    calibration: str
    p_dfdp_le_bound: float
    p_se: float
    dfdr_hat: float
    dfdr_se: float
    mean_rejections: float
    mean_alpha_hat: float
    threshold_bound_rate: float

    @classmethod
    def from_cell(cls, cell: CellSummary) -> "CellSummaryModel":
        config, summary = cell.config, cell.summary
        return cls(
            m=config.m,
            n=config.n,
            effect_size=config.effect_size,
            alpha=config.alpha,
            reps=config.reps,
            seed=config.seed,
            calibration=config.calibration,
            p_dfdp_le_bound=summary.p_dfdp_le_bound,
            p_se=summary.p_se,
            dfdr_hat=summary.dfdr_hat,
            dfdr_se=summary.dfdr_se,
            mean_rejections=cell.mean_rejections,
            mean_alpha_hat=cell.mean_alpha_hat,
            threshold_bound_rate=cell.threshold_bound_rate,
        )


class ExperimentResponse(BaseModel):
    cells: list[CellSummaryModel]
