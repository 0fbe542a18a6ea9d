"""
Distances between a mod-1 law and the uniform (Benford) reference.

The exact path works on `ModOneCdf` piece tables: on a piece,
g(s) = F(s) - s = c1 * b**s + (c2 - 1) * s + c3 has at most one interior
extremum, where c1 * ln(b) * b**s + c2 = 1, so the Kolmogorov-Smirnov sup
is a maximum over finitely many closed-form candidates, and the
Wasserstein integral splits into monotone pieces whose zeros come from the
Lambert W function. The empirical path handles raw samples.
"""
import logging
import math
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import stats
from scipy.special import lambertw

from ..errors import DomainError
from .digits import benford_pmf_vector, first_digits, significands, validate_base
from .modone import ModOneCdf, Piece

logger = logging.getLogger(__name__)


class KsDistance(NamedTuple):
    value: float
    argmax: float


class ChiSquare(NamedTuple):
    statistic: float
    dof: int


class DistanceReport(BaseModel):
    """
    Pydantic model for the distances of a mod-1 law from the uniform law.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    ks: float = Field(..., ge=0, le=1, description="Kolmogorov-Smirnov distance sup |F(s) - s|.")
    argmax_s: float = Field(..., ge=0, le=1, serialization_alias="ks_argmax",
                            description="Smallest location attaining the KS sup.")
    wasserstein: float = Field(..., ge=0, le=0.5, description="Integral of |F(s) - s| over [0, 1].")

    def to_json_dict(self) -> dict:
        return self.model_dump(by_alias=True)


def _g(piece: Piece, b: int, s: float) -> float:
    return piece.c1 * float(b) ** s + (piece.c2 - 1.0) * s + piece.c3


def _critical_point(piece: Piece, b: int, lo: float, hi: float) -> Optional[float]:
    """Interior zero of g' on (lo, hi), if any."""
    if piece.c1 == 0.0:
        return None
    target = (1.0 - piece.c2) / (piece.c1 * math.log(b))
    if target <= 0.0:
        return None
    s = math.log(target) / math.log(b)
    return s if lo < s < hi else None


def _candidates(cdf: ModOneCdf) -> List[Tuple[float, float]]:
    """(s, g) pairs, in increasing s, covering every possible extremum of |F - s|."""
    b = cdf.base
    out = []
    for i, piece in enumerate(cdf.pieces):
        lo, hi = cdf.breakpoints[i], cdf.breakpoints[i + 1]
        out.append((lo, _g(piece, b, lo)))
        s = _critical_point(piece, b, lo, hi)
        if s is not None:
            out.append((s, _g(piece, b, s)))
        # left-hand limit at the right end
        out.append((hi, _g(piece, b, hi)))
    return out


def ks_distance(cdf: ModOneCdf) -> KsDistance:
    """
    Exact sup_s |F(s) - s|.

    Both one-sided limits at every breakpoint are candidates, so step CDFs are
    handled by the same scan. Ties resolve to the smallest s.

    Returns:
        KsDistance: The distance and one location attaining it.
    """
    best, where = -1.0, 0.0
    for s, g in _candidates(cdf):
        if abs(g) > best:
            best, where = abs(g), s
    return KsDistance(value=min(best, 1.0), argmax=where)


def _integral(piece: Piece, b: int, lo: float, hi: float) -> float:
    exp_part = piece.c1 * (float(b) ** hi - float(b) ** lo) / math.log(b) if piece.c1 else 0.0
    return exp_part + 0.5 * (piece.c2 - 1.0) * (hi * hi - lo * lo) + piece.c3 * (hi - lo)


def _zero(piece: Piece, b: int, lo: float, hi: float) -> float:
    """Zero of g on a monotone bracket [lo, hi] with a sign change."""
    ln_b = math.log(b)
    slope = piece.c2 - 1.0
    if piece.c1 == 0.0:
        return -piece.c3 / slope
    if slope == 0.0:
        return math.log(-piece.c3 / piece.c1) / ln_b
    # c1 e^t + (slope/ln b) t + c3 = 0 with t = s ln b
    k = slope / ln_b
    try:
        z = (piece.c1 / k) * math.exp(-piece.c3 / k)
    except OverflowError:
        z = math.inf
    if z == 0.0 or not math.isfinite(z):
        # |c3| dwarfs the linear term: b**s = -(slope*s + c3)/c1 evaluated once at the midpoint
        mid = 0.5 * (lo + hi)
        ratio = -(slope * mid + piece.c3) / piece.c1
        s = math.log(ratio) / ln_b if ratio > 0.0 else mid
        logger.debug("Lambert W argument out of range on [%g, %g]; using the dominant-term root", lo, hi)
        return min(max(s, lo), hi)

    # rounding can push z just below the branch point at a tangency
    z = max(z, -1.0 / math.e)
    branches = (0, -1) if z < 0.0 else (0,)
    roots = [(-lambertw(z, branch).real - piece.c3 / k) / ln_b for branch in branches]
    s = min(roots, key=lambda r: max(lo - r, r - hi, 0.0))
    return min(max(s, lo), hi)


def wasserstein_distance(cdf: ModOneCdf) -> float:
    """
    Exact integral of |F(s) - s| over [0, 1].

    Each piece is cut at its critical point into monotone parts; a part whose
    end values differ in sign is cut again at its zero.
    """
    b = cdf.base
    total = 0.0
    for i, piece in enumerate(cdf.pieces):
        lo, hi = cdf.breakpoints[i], cdf.breakpoints[i + 1]
        cuts = [lo, hi]
        s = _critical_point(piece, b, lo, hi)
        if s is not None:
            cuts.insert(1, s)
        for p, q in zip(cuts, cuts[1:]):
            gp, gq = _g(piece, b, p), _g(piece, b, q)
            if gp * gq < 0.0:
                z = _zero(piece, b, p, q)
                total += abs(_integral(piece, b, p, z)) + abs(_integral(piece, b, z, q))
            else:
                total += abs(_integral(piece, b, p, q))
    return min(total, 0.5)


def distance_report(cdf: ModOneCdf) -> DistanceReport:
    """KS distance, its location and the Wasserstein distance of `cdf` from uniform."""
    ks = ks_distance(cdf)
    return DistanceReport(ks=ks.value, argmax_s=ks.argmax, wasserstein=wasserstein_distance(cdf))


def grid_ks_distance(cdf: ModOneCdf, points: int = 1_000_000) -> float:
    """Brute-force max |F(s) - s| over a uniform grid on [0, 1]; an oracle for `ks_distance`."""
    s = np.linspace(0.0, 1.0, points)
    return float(np.max(np.abs(cdf.evaluate(s) - s)))


def dkw_bound(n: int, confidence: float = 0.99) -> float:
    """Dvoretzky-Kiefer-Wolfowitz envelope sqrt(ln(2/(1-confidence)) / (2n))."""
    return math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * n))


def mod_one_phases(samples, base: int = 10) -> np.ndarray:
    """frac(log_b x) for each sample, computed from the significand."""
    b = validate_base(base)
    s, _ = significands(samples, b)
    if b == 10:
        u = np.log10(s)
    elif b == 2:
        u = np.log2(s)
    else:
        u = np.log(s) / math.log(b)
    return np.clip(u, 0.0, np.nextafter(1.0, 0.0))


def empirical_ks(samples, base: int = 10) -> float:
    """
    KS statistic of {frac(log_b x_i)} against the uniform CDF.

    Only the statistic is reported; the p-value of `scipy.stats.kstest` is dropped.

    Raises:
        DomainError: For an empty sample, or naming the index of a non-positive sample.
    """
    u = mod_one_phases(samples, base)
    if u.size == 0:
        raise DomainError("empirical_ks needs at least one sample")
    return float(stats.kstest(u, "uniform").statistic)


def first_digit_counts(samples, base: int = 10) -> np.ndarray:
    """Observed counts of first digits 1..b-1, indexed from digit 1."""
    b = validate_base(base)
    return np.bincount(first_digits(samples, b), minlength=b)[1:b]


def first_digit_frequencies(samples, base: int = 10) -> np.ndarray:
    """Observed first-digit frequencies for digits 1..b-1 (counts over n)."""
    counts = first_digit_counts(samples, base)
    return counts / counts.sum()


def first_digit_chisq(samples, base: int = 10) -> ChiSquare:
    """
    Pearson chi-square of first-digit counts against the Benford expectation.

    Returns:
        ChiSquare: Statistic and b - 2 degrees of freedom; no p-value.
    """
    b = validate_base(base)
    return chisq_from_counts(first_digit_counts(samples, b), b)


def chisq_from_counts(counts, base: int = 10) -> ChiSquare:
    """Pearson chi-square of first-digit counts (digit 1 first) against Benford."""
    b = validate_base(base)
    observed = np.asarray(counts, dtype=np.float64)
    expected = observed.sum() * benford_pmf_vector(b)
    statistic = float(stats.chisquare(observed, expected).statistic)
    return ChiSquare(statistic=statistic, dof=b - 2)
