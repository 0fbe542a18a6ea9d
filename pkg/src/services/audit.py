"""
Executable audit of the claim that large spread implies Benford conformance.

Each operation returns pure data (pydantic models); the judgments live in the
test suite. The suite covers:
  - the sharp lower bound on the KS distance of the mantissa law of any
    uniform(0, T) variable from Benford, checked against an independent
    minimization over the phase theta = frac(log_b T);
  - the integer counterexample on {1, ..., 2*b**n};
  - the pair X = b**Y, Z = b**(3Y/2) where Z is more spread out on every
    measure and scale yet farther from Benford;
  - the base-change audit, the Benford-on-log-scale failure and the
    falsifying family of ever-wider uniform laws.
"""
import logging
import math
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import minimize_scalar

from ..config import settings
from ..errors import DomainError
from .digits import benford_first_digit_pmf, validate_base
from .metrics import DistanceReport, distance_report, ks_distance, wasserstein_distance
from .modone import (
    BenfordDecade,
    PowerOfUniform,
    UniformContinuous,
    log_mod_one,
    native_base,
    uniform_interval_mod_one,
    uniform_phase_cdf,
)
from .spread import MEASURES, SpreadReport, SpreadScale, spread_analytic

logger = logging.getLogger(__name__)

# The decimal printed next to the closed form of the base-10 bound. The closed
# form itself evaluates to 0.134422..., and is the value used everywhere.
PRINTED_BOUND_DECIMAL = 0.1334

REFINE_TOLERANCE = 1e-10


# --- Sharp bound for uniform laws ---
class PhaseMinimum(NamedTuple):
    theta: float
    value: float


class Prop1Curve(BaseModel):
    """
    Pydantic model for D(theta), the KS distance of the mantissa law of
    uniform(0, b**theta) from uniform, sampled on a phase grid.
    """
    model_config = ConfigDict(frozen=True)

    base: int
    thetas: List[float] = Field(..., description="Uniform grid over [0, 1).")
    distances: List[float] = Field(..., description="D(theta) on the grid, exact KS.")
    wasserstein: List[float] = Field(..., description="Wasserstein distance on the same grid.")
    theta_star: float = Field(..., description="Refined minimizer of D.")
    d_star: float = Field(..., description="D(theta_star).")
    w_theta_star: float = Field(..., description="Refined minimizer of the Wasserstein curve.")
    w_star: float = Field(..., description="Minimal Wasserstein distance; computed, no reference value.")
    bound: float = Field(..., description="Closed-form bound (base 10) or the computed minimum.")
    bound_source: str = Field(..., description="'closed_form' or 'numerical'.")

    @property
    def residual(self) -> float:
        return abs(self.d_star - self.bound)


def phase_distance(theta: float, base: int = 10) -> float:
    """D(theta): exact KS distance of uniform_phase_cdf(theta) from uniform."""
    return ks_distance(uniform_phase_cdf(theta % 1.0, base)).value


def phase_wasserstein(theta: float, base: int = 10) -> float:
    return wasserstein_distance(uniform_phase_cdf(theta % 1.0, base))


def _refine(fun, thetas: np.ndarray, values: np.ndarray) -> PhaseMinimum:
    """Golden-section refinement around the grid argmin of a 1-periodic function."""
    i = int(np.argmin(values))
    step = thetas[1] - thetas[0]
    a, m, c = thetas[i] - step, thetas[i], thetas[i] + step
    try:
        result = minimize_scalar(fun, bracket=(a, m, c), method="golden", tol=REFINE_TOLERANCE)
    except (ValueError, RuntimeError):
        result = minimize_scalar(fun, bounds=(a, c), method="bounded", options={"xatol": REFINE_TOLERANCE})
    theta, value = float(result.x) % 1.0, float(result.fun)
    if value > values[i]:
        theta, value = float(thetas[i]), float(values[i])
    return PhaseMinimum(theta=theta, value=value)


def minimize_over_phase(base: int = 10, grid_size: Optional[int] = None) -> PhaseMinimum:
    """
    Numerical minimum of D(theta) over [0, 1): grid scan plus golden-section refinement.
    """
    b = validate_base(base)
    n = settings.GRID if grid_size is None else grid_size
    thetas = np.arange(n) / n
    values = np.array([phase_distance(t, b) for t in thetas])
    return _refine(lambda t: phase_distance(t, b), thetas, values)


def prop1_bound(base: int = 10) -> float:
    """
    Sharp lower bound on D(theta) over all phases.

    For base 10 this is the closed form
    (-9 + ln 10 + 9 ln 9 - 9 ln ln 10) / (18 ln 10) = 0.134422...
    Other bases have no closed form here; their value is the computed minimum.
    """
    b = validate_base(base)
    if b == 10:
        ln10 = math.log(10.0)
        return (-9.0 + ln10 + 9.0 * math.log(9.0) - 9.0 * math.log(ln10)) / (18.0 * ln10)
    logger.info("no closed-form bound for base %d; returning the computed minimum", b)
    return minimize_over_phase(b).value


def prop1_curve(base: int = 10, grid_size: Optional[int] = None) -> Prop1Curve:
    """
    Samples D(theta) and the Wasserstein curve on a uniform phase grid and
    refines both minima.

    Args:
        base (int, optional): Radix. Defaults to 10.
        grid_size (int, optional): Number of grid phases, >= 16. Defaults to `settings.GRID`.

    Raises:
        DomainError: If grid_size < 16.
    """
    b = validate_base(base)
    n = settings.GRID if grid_size is None else grid_size
    if n < 16:
        raise DomainError(f"grid_size must be >= 16, got {n}")

    thetas = np.arange(n) / n
    cdfs = [uniform_phase_cdf(t, b) for t in thetas]
    distances = np.array([ks_distance(c).value for c in cdfs])
    wasserstein = np.array([wasserstein_distance(c) for c in cdfs])

    ks_min = _refine(lambda t: phase_distance(t, b), thetas, distances)
    w_min = _refine(lambda t: phase_wasserstein(t, b), thetas, wasserstein)
    if b == 10:
        bound, source = prop1_bound(10), "closed_form"
    else:
        bound, source = ks_min.value, "numerical"
    logger.info("base %d: theta*=%.10f d*=%.10f bound=%.10f (%s)", b, ks_min.theta, ks_min.value, bound, source)

    return Prop1Curve(
        base=b,
        thetas=thetas.tolist(),
        distances=distances.tolist(),
        wasserstein=wasserstein.tolist(),
        theta_star=ks_min.theta,
        d_star=ks_min.value,
        w_theta_star=w_min.theta,
        w_star=w_min.value,
        bound=bound,
        bound_source=source,
    )


class WideUniformRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    m: int
    T: float
    raw_range: float
    ks: float


def large_spread_sequence(ms: Sequence[int], base: int = 10,
                          theta: Optional[float] = None) -> List[WideUniformRow]:
    """
    Uniform(0, b**(m + theta + 1/2)) for each m: the raw range grows without
    bound while the KS distance stays fixed, since D only depends on the phase.

    Args:
        ms (Sequence[int]): Decade offsets.
        base (int, optional): Radix. Defaults to 10.
        theta (float, optional): Base phase. Defaults to the refined minimizer.
    """
    b = validate_base(base)
    if theta is None:
        theta = minimize_over_phase(b).theta
    rows = []
    for m in ms:
        T = float(b) ** (m + theta + 0.5)
        dist = UniformContinuous(T=T)
        rows.append(WideUniformRow(m=m, T=T, raw_range=T, ks=ks_distance(log_mod_one(dist, b)).value))
    return rows


# --- Integer counterexample ---
def leading_one_fraction(n: int, base: int = 10) -> Fraction:
    """
    Exact share of {1, ..., 2*b**n} whose first significant digit is 1.

    Counted in closed form: each decade [b**j, 2*b**j) for j = 0..n is inside
    the range, giving (b**(n+1) - 1)/(b - 1) values. Integers have unbounded
    width in Python, so no capacity limit applies.

    Raises:
        DomainError: If n < 0.
    """
    b = validate_base(base)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if b == 2:
        return Fraction(1)
    return Fraction((b ** (n + 1) - 1) // (b - 1), 2 * b ** n)


class CounterexampleRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    population: int
    fraction: str
    value: float
    benford_pmf_1: float


def counterexamples_report(n_max: int = 12, base: int = 10, n_min: int = 0) -> List[CounterexampleRow]:
    """leading_one_fraction for n = n_min..n_max next to the Benford probability of a leading 1."""
    b = validate_base(base)
    pmf = benford_first_digit_pmf(1, b)
    rows = []
    for n in range(n_min, n_max + 1):
        f = leading_one_fraction(n, b)
        rows.append(CounterexampleRow(
            n=n, population=2 * b ** n, fraction=f"{f.numerator}/{f.denominator}",
            value=float(f), benford_pmf_1=pmf,
        ))
    return rows


# --- Distance does not decrease with spread ---
class NonmonotonicityRow(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    measure: str
    scale: SpreadScale
    x_value: float
    z_value: float
    ks_x: float
    ks_z: float

    @property
    def z_exceeds_x(self) -> bool:
        return self.z_value > self.x_value


class NonmonotonicityReport(BaseModel):
    """
    Pydantic model comparing X = b**Y (exactly Benford) with Z = b**(3Y/2).
    """
    model_config = ConfigDict(frozen=True)

    base: int
    alpha: float
    rows: List[NonmonotonicityRow]
    distance_x: DistanceReport
    distance_z: DistanceReport


def nonmonotonicity_report(base: int = 10, alpha: Optional[float] = None) -> NonmonotonicityReport:
    """
    Spread measures of X and Z on the raw and log scales beside their distances from Benford.
    """
    b = validate_base(base)
    alpha = settings.ALPHA if alpha is None else alpha
    x, z = PowerOfUniform(a=1.0, base=b), PowerOfUniform(a=1.5, base=b)
    dx, dz = distance_report(log_mod_one(x, b)), distance_report(log_mod_one(z, b))

    rows = []
    for scale in (SpreadScale.RAW, SpreadScale.LOG):
        sx = spread_analytic(x, scale, alpha, b)
        sz = spread_analytic(z, scale, alpha, b)
        for measure in MEASURES:
            rows.append(NonmonotonicityRow(
                measure=measure, scale=scale,
                x_value=getattr(sx, measure), z_value=getattr(sz, measure),
                ks_x=dx.ks, ks_z=dz.ks,
            ))
    return NonmonotonicityReport(base=b, alpha=alpha, rows=rows, distance_x=dx, distance_z=dz)


# --- Base change ---
class BaseChangeRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    base: int
    distance: DistanceReport
    log_spread: SpreadReport
    log_spread_ratio: float = Field(..., description="Log-scale spread relative to the distribution's own base.")


def base_change_audit(dist, bases: Sequence[int], seed: Optional[int] = None,
                      samples: Optional[int] = None) -> List[BaseChangeRow]:
    """
    Distances and log-scale spread of one distribution read in several bases.

    All four log-scale measures scale by ln(b0)/ln(b) together, so the ratio
    is taken on the standard deviation, which is finite for every variant.
    `seed` and `samples` feed the Monte Carlo fallback of very large
    UniformIntegers laws.
    """
    own = native_base(dist)
    reference = spread_analytic(dist, SpreadScale.LOG, base=own, seed=seed, samples=samples)
    rows = []
    for base in bases:
        b = validate_base(base)
        log_spread = spread_analytic(dist, SpreadScale.LOG, base=b, seed=seed, samples=samples)
        rows.append(BaseChangeRow(
            base=b,
            distance=distance_report(log_mod_one(dist, b)),
            log_spread=log_spread,
            log_spread_ratio=log_spread.std_dev / reference.std_dev,
        ))
    return rows


# --- Benford variables are not Benford on the log scale ---
def log_of_benford_audit(k: int, base: int = 10) -> DistanceReport:
    """
    Distance from Benford of log_b X_k, X_k with density 1/(x ln b) on (b**k, b**(k+1)).

    log_b X_k is uniform on (k, k+1), so this is the mod-1 law of log_b of a
    uniform variable on (k, k+1).

    Raises:
        DomainError: For k <= 0, where log_b X_k takes values in (0, 1] or below
            and its logarithm is negative or undefined.
    """
    b = validate_base(base)
    if k < 1:
        raise DomainError(
            f"k must be >= 1: for k={k} log_b X_k reaches values <= 1, where log log is not positive or undefined"
        )
    return distance_report(uniform_interval_mod_one(float(k), float(k + 1), b))


def benford_decade_distance(k: int, base: int = 10) -> DistanceReport:
    """Distance from Benford of X_k itself (zero)."""
    return distance_report(log_mod_one(BenfordDecade(k=k, base=base), base))


# --- Plot-ready CSV ---
def write_curve_csv(curve: Prop1Curve, path) -> None:
    pd.DataFrame({"theta": curve.thetas, "D": curve.distances, "W": curve.wasserstein}).to_csv(
        path, index=False, lineterminator="\n")


def write_nonmonotonicity_csv(report: NonmonotonicityReport, path) -> None:
    pd.DataFrame([{
        "measure": r.measure, "scale": r.scale.value,
        "X_value": r.x_value, "Z_value": r.z_value, "ks_X": r.ks_x, "ks_Z": r.ks_z,
    } for r in report.rows]).to_csv(path, index=False, lineterminator="\n")


def write_trace_csv(trace, path) -> None:
    pd.DataFrame([{"n_components": r.n_components, "ks": r.ks, "chisq": r.chisq} for r in trace.rows]).to_csv(
        path, index=False, lineterminator="\n")
