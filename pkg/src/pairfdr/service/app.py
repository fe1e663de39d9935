"""HTTP facade over the pairwise-testing library and Monte Carlo engine."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..bh import bh_stepup, declare_signs
from ..calibration import CalibrationPolicy, calibrate_pair
from ..groups import GroupSummary, pairwise_statistics, summarize_group
from ..metrics import GroundTruth, assumption_diagnostics, classify_pairs
from ..simulation import run_experiment
from .models import (
    CellSummaryModel,
    DecisionRequest,
    DecisionResponse,
    DiagnosticsRequest,
    DiagnosticsResponse,
    ExperimentRequest,
    ExperimentResponse,
    PairDecisionModel,
)

app = FastAPI(
    title="pairfdr",
    version="0.1.0",
    description=(
        "Directional false-discovery-rate control for all-pairs comparisons "
        "of group means, plus a seeded Monte Carlo experiment runner."
    ),
)


@app.exception_handler(ValueError)
async def _bad_value(request: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": app.version}


@app.post("/v1/decisions", response_model=DecisionResponse)
def decisions(request: DecisionRequest) -> DecisionResponse:
    """Run the directional step-up on group summaries or raw samples."""
    if request.groups is not None:
        groups = [GroupSummary(g.mean, g.variance, g.size) for g in request.groups]
    else:
        groups = [summarize_group(s) for s in request.samples]
    stats = pairwise_statistics(groups)
    policy = CalibrationPolicy(request.calibration, group_sizes=tuple(g.size for g in groups))
    triples = [calibrate_pair(s, policy) for s in stats]
    decided = declare_signs(
        bh_stepup([(s.pair, tr.p_two_sided) for s, tr in zip(stats, triples)], request.alpha),
        stats,
    )
    return DecisionResponse(
        alpha=decided.alpha,
        q=decided.q,
        k_hat=decided.k_hat,
        threshold_alpha_hat=decided.threshold_alpha_hat,
        decisions=[
            PairDecisionModel(
                i=s.i,
                j=s.j,
                t=s.t,
                p_lower=tr.p_lower,
                p_upper=tr.p_upper,
                p_two_sided=tr.p_two_sided,
                rejected=d.rejected,
                declared_sign=d.declared_sign,
            )
            for s, tr, d in zip(stats, triples, decided.decisions)
        ],
    )


@app.post("/v1/diagnostics", response_model=DiagnosticsResponse)
def diagnostics(request: DiagnosticsRequest) -> DiagnosticsResponse:
    """Balance constants, signal check, and the pair partition for a design."""
    truth = GroundTruth(means=request.means, scales=request.scales, sizes=request.sizes)
    report = assumption_diagnostics(truth, request.alpha)
    partition = classify_pairs(truth)
    return DiagnosticsResponse(
        alpha=report.alpha,
        c_lower=report.c_lower,
        c_upper=report.c_upper,
        signal_threshold=report.signal_threshold,
        signal_pair_count=report.signal_pair_count,
        signal_condition_met=report.signal_condition_met,
        q0=partition.q0,
        q_plus=partition.q_plus,
        q_minus=partition.q_minus,
    )


@app.post("/v1/experiments", response_model=ExperimentResponse)
def experiments(request: ExperimentRequest) -> ExperimentResponse:
    """Run seeded experiment cells and return one aggregate row per cell."""
    cells = run_experiment([c.to_config() for c in request.configs], workers=request.workers)
    return ExperimentResponse(cells=[CellSummaryModel.from_cell(c) for c in cells])
