"""
This module implements a FastAPI service exposing the Benford audits.

It analyzes posted datasets for first-digit conformance, runs the fixed audits
(sharp bound for uniform laws, integer counterexample, spread against distance,
base change, Benford variables on the log scale) and pooled-mixture
simulations. Pydantic models are used for request validation and response
serialization.
"""
import logging
from typing import List

import uvicorn
from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel, Field

from .config import configure_logging, settings
from .errors import BenfordAuditError, EmptyDataError
from .services import audit
from .services.ingest import ConformanceReport, analyze_dataset, dataset_from_values
from .services.mixture import MixtureSpec, MixtureTrace, mixture_experiment
from .services.modone import PowerOfUniform

configure_logging()
logger = logging.getLogger(__name__)


# --- Pydantic Models for Request and Response ---
class AnalyzeRequest(BaseModel):
    """
    Pydantic model for a dataset posted for analysis.
    """
    values: List[float] = Field(..., description="Observed values; non-positive and non-finite ones are skipped.")
    base: int = Field(settings.BASE, ge=2, description="Radix of the digit analysis.")
    alpha: float = Field(settings.ALPHA, gt=0, lt=0.5, description="Quantile level of the quantile spread.")


class Prop1Summary(BaseModel):
    """
    Pydantic model for the sharp-bound audit without the full curve.
    """
    base: int
    grid: int
    bound: float = Field(..., description="Closed form for base 10, computed minimum otherwise.")
    bound_source: str
    d_star: float = Field(..., description="Refined minimum of D(theta).")
    theta_star: float
    residual: float = Field(..., description="|d_star - bound|.")
    w_star: float = Field(..., description="Minimum of the Wasserstein curve.")


# --- FastAPI App Initialization ---
app = FastAPI(
    title="Benford Audit Service",
    description="Checks data against Benford's law and audits the claim that large spread implies conformance.",
    version="0.1.0",
)


def _fail(e: BenfordAuditError) -> HTTPException:
    status = 400 if isinstance(e, EmptyDataError) else 422
    logger.info("request rejected (%d): %s", status, e)
    return HTTPException(status_code=status, detail=str(e))


# --- API Endpoints ---
@app.post("/analyze", response_model=ConformanceReport)
async def analyze(request: AnalyzeRequest):
    """
    First-digit conformance report of the posted values.

    Args:
        request (AnalyzeRequest): Values, radix and quantile level.

    Returns:
        ConformanceReport: Digit table, empirical KS, chi-square and spread.

    Raises:
        HTTPException: 400 when no usable value remains, 422 for an invalid base.
    """
    try:
        return analyze_dataset(dataset_from_values(request.values), request.base, request.alpha)
    except BenfordAuditError as e:
        raise _fail(e)


@app.get("/audit/prop1", response_model=Prop1Summary)
async def audit_prop1(base: int = Query(10, ge=2), grid: int = Query(1024, ge=16)):
    """
    Sharp KS bound for uniform laws and the refined minimum of D(theta).

    Args:
        base (int): Radix b >= 2.
        grid (int): Phase grid size, at least 16.

    Returns:
        Prop1Summary: Bound, minimizer, residual and the Wasserstein minimum.

    Raises:
        HTTPException: 422 for an invalid base or grid.
    """
    try:
        curve = audit.prop1_curve(base, grid)
    except BenfordAuditError as e:
        raise _fail(e)
    return Prop1Summary(
        base=curve.base, grid=grid, bound=curve.bound, bound_source=curve.bound_source,
        d_star=curve.d_star, theta_star=curve.theta_star, residual=curve.residual, w_star=curve.w_star,
    )


@app.get("/audit/nonmonotonicity", response_model=audit.NonmonotonicityReport)
async def audit_nonmonotonicity(base: int = Query(10, ge=2), alpha: float = Query(settings.ALPHA, gt=0, lt=0.5)):
    """
    Spread and distance of X = b**Y against Z = b**(3Y/2), Y uniform on [0, 1].

    Args:
        base (int): Radix b >= 2.
        alpha (float): Quantile level of the quantile spread.

    Returns:
        NonmonotonicityReport: One row per scale and measure, plus both distances.
    """
    return audit.nonmonotonicity_report(base, alpha)


@app.get("/audit/basechange", response_model=List[audit.BaseChangeRow])
async def audit_basechange(bases: str = Query("10,2"), a: float = Query(1.0, gt=0), base: int = Query(10, ge=2)):
    """
    Base-change audit of PowerOfUniform(a) defined in `base`, read in each of `bases`.

    Args:
        bases (str): Comma-separated radices.
        a (float): Exponent of the power of the uniform law.
        base (int): Radix the distribution is defined in.

    Returns:
        List[BaseChangeRow]: Distance and log-scale spread per radix.

    Raises:
        HTTPException: 422 for a malformed or invalid radix.
    """
    try:
        radices = [int(part) for part in bases.split(",") if part.strip()]
    except ValueError:
        raise HTTPException(status_code=422, detail=f"bases must be comma-separated integers, got {bases!r}")
    try:
        return audit.base_change_audit(PowerOfUniform(a=a, base=base), radices)
    except BenfordAuditError as e:
        raise _fail(e)


@app.get("/audit/counterexamples", response_model=List[audit.CounterexampleRow])
async def audit_counterexamples(n: int = Query(1, ge=0, le=1000), base: int = Query(10, ge=2)):
    """Exact share of leading 1s among the integers 1..2b**n."""
    return audit.counterexamples_report(n, base, n_min=n)


@app.get("/audit/benford-log", response_model=audit.DistanceReport)
async def audit_benford_log(k: int = Query(1), base: int = Query(10, ge=2)):
    """
    Distance from Benford of log_b of a Benford variable on decade k.

    Raises:
        HTTPException: 422 when k < 1.
    """
    try:
        return audit.log_of_benford_audit(k, base)
    except BenfordAuditError as e:
        raise _fail(e)


@app.post("/simulate", response_model=MixtureTrace)
async def simulate(spec: MixtureSpec, base: int = Query(10, ge=2)):
    """
    Pooled-mixture conformance trace of the posted mixture.

    Raises:
        HTTPException: 422 for an unknown sampler or invalid parameters.
    """
    try:
        return mixture_experiment(spec, base)
    except BenfordAuditError as e:
        raise _fail(e)


if __name__ == "__main__":
    uvicorn.run(app, host="0.0.0.0", port=8000)
