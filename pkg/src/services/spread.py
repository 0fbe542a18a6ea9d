"""
Dispersion measures on raw, log_b and log_b log_b scales.

Four measures are reported: range, the (1-alpha)/alpha quantile spread
(alpha = 0.25 is the interquartile range), the standard deviation, and the
Gini mean difference E|X - X'| for independent copies. The mean difference
is the unnormalized quantity; the normalized Gini index is not computed.
"""
import enum
import logging
import math
from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import settings
from ..errors import DomainError
from .digits import validate_base
from .modone import (
    BenfordDecade,
    PowerOfUniform,
    UniformContinuous,
    UniformIntegers,
    native_base,
    sample,
)

logger = logging.getLogger(__name__)

MEASURES = ("range", "quantile_spread", "std_dev", "gini_mean_difference")


class SpreadScale(str, enum.Enum):
    RAW = "raw"
    LOG = "log"
    LOGLOG = "loglog"


class SpreadReport(BaseModel):
    """
    Pydantic model for the four dispersion measures of one variable on one scale.

    A support touching 0 has an infinite log-range; it is reported as `inf`
    (serialized as the JSON string "Infinity"), never as a large float.
    """
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    scale: SpreadScale = Field(..., description="raw, log (log_b X) or loglog (log_b log_b X).")
    base: int = Field(..., ge=2, description="Radix of the logarithms; kept on raw reports for provenance.")
    alpha: float = Field(..., gt=0, lt=0.5, description="Quantile level of the quantile spread.")
    range: float = Field(..., ge=0, description="sup - inf of the support, or max - min of a sample.")
    quantile_spread: float = Field(..., ge=0, description="Distance between the (1-alpha)- and alpha-quantiles.")
    std_dev: float = Field(..., ge=0, description="Standard deviation.")
    gini_mean_difference: float = Field(..., ge=0, description="Mean absolute difference E|X - X'|.")
    estimated: Dict[str, bool] = Field(
        default_factory=lambda: {m: False for m in MEASURES},
        description="Per measure: True when the value is a seeded Monte Carlo estimate.",
    )

    def measures(self) -> Dict[str, float]:
        return {m: getattr(self, m) for m in MEASURES}


def _check_alpha(alpha: float) -> float:
    if not 0.0 < alpha < 0.5:
        raise DomainError(f"alpha must lie in (0, 1/2), got {alpha}")
    return float(alpha)


def _uniform_measures(width: float, alpha: float) -> Dict[str, float]:
    return {
        "range": width,
        "quantile_spread": (1.0 - 2.0 * alpha) * width,
        "std_dev": width / math.sqrt(12.0),
        "gini_mean_difference": width / 3.0,
    }


def _exp_uniform_measures(offset: float, span: float, b: int, alpha: float) -> Dict[str, float]:
    """X = b**(offset + span*Y), Y uniform on (0, 1)."""
    scale = float(b) ** offset
    c = span * math.log(b)
    mean = math.expm1(c) / c
    var = math.expm1(2.0 * c) / (2.0 * c) - mean ** 2
    gini = (2.0 * (c - 2.0) * math.expm1(c) + 4.0 * c) / (c * c)
    return {
        "range": scale * math.expm1(c),
        "quantile_spread": scale * (math.exp(c * (1.0 - alpha)) - math.exp(c * alpha)),
        "std_dev": scale * math.sqrt(max(var, 0.0)),
        "gini_mean_difference": scale * gini,
    }


def _log_uniform_measures(lo: float, hi: float, b: int, alpha: float) -> Dict[str, float]:
    """log_b V for V uniform on (lo, hi), 0 <= lo < hi."""
    ln_b = math.log(b)
    if lo == 0.0:
        # ln V = ln hi - E with E standard exponential: sd 1 and mean difference 1
        return {
            "range": math.inf,
            "quantile_spread": math.log((1.0 - alpha) / alpha) / ln_b,
            "std_dev": 1.0 / ln_b,
            "gini_mean_difference": 1.0 / ln_b,
        }
    width = hi - lo
    log_ratio = math.log1p(width / lo)

    def antiderivative_1(v):
        return v * math.log(v) - v

    def antiderivative_2(v):
        lv = math.log(v)
        return v * lv * lv - 2.0 * v * lv + 2.0 * v

    mean = (antiderivative_1(hi) - antiderivative_1(lo)) / width
    second = (antiderivative_2(hi) - antiderivative_2(lo)) / width
    var = max(second - mean * mean, 0.0)
    inner = 0.5 * (hi * hi - lo * lo) - lo * hi * log_ratio
    return {
        "range": log_ratio / ln_b,
        "quantile_spread": math.log((lo + (1.0 - alpha) * width) / (lo + alpha * width)) / ln_b,
        "std_dev": math.sqrt(var) / ln_b,
        "gini_mean_difference": 2.0 * inner / (width * width * ln_b),
    }


def _equal_weight_measures(values: np.ndarray, alpha: float) -> Dict[str, float]:
    """Population measures of N equally likely sorted values."""
    n = values.size
    lower = values[max(math.ceil(alpha * n) - 1, 0)]
    upper = values[max(math.ceil((1.0 - alpha) * n) - 1, 0)]
    i = np.arange(1, n + 1, dtype=np.float64)
    return {
        "range": float(values[-1] - values[0]),
        "quantile_spread": float(upper - lower),
        "std_dev": float(np.std(values)),
        "gini_mean_difference": max(float(2.0 * np.sum((2.0 * i - n - 1.0) * values) / (n * n)), 0.0),
    }


def _log_values(x: np.ndarray, b: int) -> np.ndarray:
    if b == 10:
        return np.log10(x)
    if b == 2:
        return np.log2(x)
    return np.log(x) / math.log(b)


def _raw(dist, alpha: float) -> Dict[str, float]:
    if isinstance(dist, UniformContinuous):
        return _uniform_measures(dist.T, alpha)
    if isinstance(dist, PowerOfUniform):
        return _exp_uniform_measures(0.0, dist.a, dist.base, alpha)
    if isinstance(dist, BenfordDecade):
        return _exp_uniform_measures(float(dist.k), 1.0, dist.base, alpha)
    N = dist.N
    return {
        "range": float(N - 1),
        "quantile_spread": float(math.ceil((1.0 - alpha) * N) - math.ceil(alpha * N)),
        "std_dev": math.sqrt((N * N - 1) / 12.0),
        "gini_mean_difference": (N * N - 1) / (3.0 * N),
    }


def _log(dist, b: int, alpha: float) -> Dict[str, float]:
    if isinstance(dist, UniformContinuous):
        return _log_uniform_measures(0.0, dist.T, b, alpha)
    if isinstance(dist, PowerOfUniform):
        return _uniform_measures(dist.a * math.log(dist.base) / math.log(b), alpha)
    if isinstance(dist, BenfordDecade):
        return _uniform_measures(math.log(dist.base) / math.log(b), alpha)
    return _equal_weight_measures(_log_values(np.arange(1, dist.N + 1, dtype=np.float64), b), alpha)


def _loglog(dist, b: int, alpha: float) -> Dict[str, float]:
    if isinstance(dist, PowerOfUniform):
        return _log_uniform_measures(0.0, dist.a * math.log(dist.base) / math.log(b), b, alpha)
    if isinstance(dist, BenfordDecade):
        if dist.k < 0:
            raise DomainError(
                f"log log is undefined for BenfordDecade(k={dist.k}): log_b X is negative on part of the support"
            )
        c = math.log(dist.base) / math.log(b)
        return _log_uniform_measures(dist.k * c, (dist.k + 1) * c, b, alpha)
    raise DomainError(
        f"log log is undefined for {type(dist).__name__}: its support reaches values <= 1"
    )


def spread_analytic(dist, scale: SpreadScale = SpreadScale.RAW, alpha: Optional[float] = None,
                    base: Optional[int] = None, seed: Optional[int] = None,
                    samples: Optional[int] = None) -> SpreadReport:
    """
    Closed-form dispersion measures of an analytic distribution.

    Args:
        dist (AnalyticDistribution): The distribution.
        scale (SpreadScale, optional): Scale of the measures. Defaults to raw.
        alpha (float, optional): Quantile level in (0, 1/2). Defaults to `settings.ALPHA`.
        base (int, optional): Radix of the logarithms. Defaults to the distribution's own.
        seed (int, optional): Seed of the Monte Carlo fallback. Defaults to `settings.SEED`.
        samples (int, optional): Draws of the Monte Carlo fallback. Defaults to `settings.SAMPLES`.

    Returns:
        SpreadReport: The four measures; `estimated` flags any Monte Carlo value.

    Raises:
        DomainError: For alpha out of range or an undefined log log scale.
    """
    alpha = _check_alpha(settings.ALPHA if alpha is None else alpha)
    scale = SpreadScale(scale)
    b = validate_base(native_base(dist) if base is None else base)
    estimated = {m: False for m in MEASURES}

    if scale is SpreadScale.RAW:
        values = _raw(dist, alpha)
    elif scale is SpreadScale.LOG and isinstance(dist, UniformIntegers) and dist.N > settings.MAX_ATOMS:
        n = settings.SAMPLES if samples is None else samples
        draws = sample(dist, n, settings.SEED if seed is None else seed)
        logger.info("UniformIntegers(%d) log spread estimated from %d seeded draws", dist.N, n)
        values = spread_sample(draws, scale, alpha, b).measures()
        values["range"] = _log_values(np.array([float(dist.N)]), b)[0]
        estimated = {m: m != "range" for m in MEASURES}
    elif scale is SpreadScale.LOG:
        values = _log(dist, b, alpha)
    else:
        values = _loglog(dist, b, alpha)

    return SpreadReport(scale=scale, base=b, alpha=alpha, estimated=estimated, **values)


def spread_sample(samples, scale: SpreadScale = SpreadScale.RAW, alpha: Optional[float] = None,
                  base: Optional[int] = None) -> SpreadReport:
    """
    Sample counterparts of the four measures.

    Quantiles use linear interpolation between order statistics (the type-7
    convention, numpy's default), the standard deviation uses n - 1, and the
    mean difference uses the sorted formula
    (2 / (n(n-1))) * sum_i (2i - n - 1) * x_(i).

    Raises:
        DomainError: For n < 2, or a value outside the domain of the log scale
            (the index of the first offending value is attached).
    """
    alpha = _check_alpha(settings.ALPHA if alpha is None else alpha)
    scale = SpreadScale(scale)
    b = validate_base(settings.BASE if base is None else base)
    x = np.asarray(samples, dtype=np.float64)
    n = x.size
    if n < 2:
        raise DomainError(f"spread needs at least 2 samples, got {n}")

    if scale is not SpreadScale.RAW:
        bad = ~(x > 0)
        if bad.any():
            i = int(np.argmax(bad))
            raise DomainError(f"value at index {i} is not positive: {x[i]!r}", index=i)
        x = _log_values(x, b)
    if scale is SpreadScale.LOGLOG:
        bad = ~(x > 0)
        if bad.any():
            i = int(np.argmax(bad))
            raise DomainError(f"value at index {i} is <= 1, so its log log is undefined", index=i)
        x = _log_values(x, b)

    v = np.sort(x)
    i = np.arange(1, n + 1, dtype=np.float64)
    return SpreadReport(
        scale=scale,
        base=b,
        alpha=alpha,
        range=float(v[-1] - v[0]),
        quantile_spread=float(np.quantile(v, 1.0 - alpha) - np.quantile(v, alpha)),
        std_dev=float(np.std(v, ddof=1)),
        gini_mean_difference=max(float(2.0 * np.sum((2.0 * i - n - 1.0) * v) / (n * (n - 1.0))), 0.0),
    )
