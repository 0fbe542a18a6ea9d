"""
Seeded sampler registry and the pooled-mixture conformance experiment.

Pooling equally sized samples from many positive distributions whose scales
are spread without bias drives the first-digit law toward Benford. The
experiment here demonstrates that effect; it proves nothing.
"""
import logging
import math
from typing import Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from scipy.special import ndtri

from ..errors import ConfigurationError
from .digits import validate_base
from .metrics import empirical_ks, first_digit_chisq
from .modone import open_uniform, stream_rng

logger = logging.getLogger(__name__)

# Stream of the parameter draws in `random_mixture_spec`; component streams are 0..n-1.
PARAMETER_STREAM = 2 ** 31


# --- Sampler parameters ---
class UniformParams(BaseModel):
    T: float = Field(..., gt=0, description="Upper end of (0, T).")


class ExponentialParams(BaseModel):
    rate: float = Field(..., gt=0, description="Rate lambda; the mean is 1/lambda.")


class LognormalParams(BaseModel):
    mu: float = Field(..., description="Mean of ln X.")
    sigma: float = Field(..., gt=0, description="Standard deviation of ln X.")


class ParetoParams(BaseModel):
    xm: float = Field(..., gt=0, description="Scale (minimum) of the support.")
    a: float = Field(..., gt=0, description="Tail index.")


class PowerOfUniformParams(BaseModel):
    a: float = Field(..., gt=0, description="Exponent scale; X = scale * base**(a*Y).")
    scale: float = Field(1.0, gt=0, description="Multiplicative scale.")
    base: int = Field(10, ge=2, description="Radix of the exponent.")


def _uniform(p: UniformParams, u: np.ndarray) -> np.ndarray:
    return p.T * u


def _exponential(p: ExponentialParams, u: np.ndarray) -> np.ndarray:
    return -np.log(u) / p.rate


def _lognormal(p: LognormalParams, u: np.ndarray) -> np.ndarray:
    return np.exp(p.mu + p.sigma * ndtri(u))


def _pareto(p: ParetoParams, u: np.ndarray) -> np.ndarray:
    return p.xm * np.power(u, -1.0 / p.a)


def _power_of_uniform(p: PowerOfUniformParams, u: np.ndarray) -> np.ndarray:
    return p.scale * np.power(float(p.base), p.a * u)


SAMPLERS: Dict[str, tuple] = {
    "uniform": (UniformParams, _uniform),
    "exponential": (ExponentialParams, _exponential),
    "lognormal": (LognormalParams, _lognormal),
    "pareto": (ParetoParams, _pareto),
    "power_of_uniform": (PowerOfUniformParams, _power_of_uniform),
}
"""Inverse-CDF samplers by id: (parameter model, transform of open uniforms)."""


# --- Spec and trace models ---
class MixtureComponent(BaseModel):
    """
    Pydantic model for one pooled source: a registry id and its parameters.
    """
    sampler: str = Field(..., description="Registry id, one of SAMPLERS.")
    params: dict = Field(default_factory=dict, description="Keyword parameters of the sampler.")


class MixtureSpec(BaseModel):
    """
    Pydantic model for a mixture experiment.
    """
    components: List[MixtureComponent] = Field(..., min_length=1, description="Sources, pooled in order.")
    samples_per_component: int = Field(..., ge=1, description="Draws taken from every component.")
    seed: int = Field(0, ge=0, description="Seed of every component stream.")


class TraceRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_components: int
    n_samples: int
    ks: float
    chisq: float
    dof: int


class MixtureTrace(BaseModel):
    """
    Pydantic model for the conformance trace of the growing pool.
    """
    base: int
    seed: int
    rows: List[TraceRow]


def resolve_component(component: MixtureComponent, position: int = 0):
    """
    Looks up and validates a component's sampler.

    Returns:
        tuple: (validated params, transform).

    Raises:
        ConfigurationError: For an unknown id or invalid parameters; the message
            carries the JSON path of the offending field.
    """
    if component.sampler not in SAMPLERS:
        raise ConfigurationError(
            f"components[{position}].sampler: unknown sampler id '{component.sampler}' "
            f"(known: {', '.join(sorted(SAMPLERS))})"
        )
    model, transform = SAMPLERS[component.sampler]
    try:
        params = model(**component.params)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"])
        raise ConfigurationError(f"components[{position}].params.{field}: {first['msg']}") from e
    return params, transform


def draw_component(component: MixtureComponent, n: int, seed: int, stream: int) -> np.ndarray:
    """n draws of one component from stream (seed, stream)."""
    params, transform = resolve_component(component, stream)
    return transform(params, open_uniform(stream_rng(seed, stream), n))


def mixture_experiment(spec: MixtureSpec, base: int = 10) -> MixtureTrace:
    """
    Pools the components in order and reports conformance after each one.

    Component i is drawn from stream (seed, i), so the trace depends only on
    the spec.

    Args:
        spec (MixtureSpec): Components, per-component count and seed.
        base (int, optional): Radix of the conformance statistics. Defaults to 10.

    Returns:
        MixtureTrace: empirical KS and first-digit chi-square per prefix.

    Raises:
        ConfigurationError: For an unknown sampler id or bad parameters.
    """
    b = validate_base(base)
    for i, component in enumerate(spec.components):
        resolve_component(component, i)

    pooled = np.empty(0, dtype=np.float64)
    rows = []
    for i, component in enumerate(spec.components):
        draws = draw_component(component, spec.samples_per_component, spec.seed, i)
        pooled = np.concatenate((pooled, draws))
        chi = first_digit_chisq(pooled, b)
        rows.append(TraceRow(
            n_components=i + 1,
            n_samples=pooled.size,
            ks=empirical_ks(pooled, b),
            chisq=chi.statistic,
            dof=chi.dof,
        ))
        logger.debug("pooled %d components: ks=%.5f", i + 1, rows[-1].ks)
    logger.info("mixture of %d components: final ks=%.5f", len(rows), rows[-1].ks)
    return MixtureTrace(base=b, seed=spec.seed, rows=rows)


def random_mixture_spec(n_components: int = 20, samples_per_component: int = 10_000,
                        seed: int = 42, base: int = 10) -> MixtureSpec:
    """
    Heterogeneous mixture with unbiased, seeded parameters.

    Families cycle through the registry. Each family draws its shape once
    (lognormal sigma in [0.5, 1.5], Pareto a in [0.5, 3], power-of-uniform a
    in [1, 4]) and gives its j-th member the scale base**(m + phase) with m a
    random decade in [-3, 3] and phase = frac(offset + j / members), offset
    uniform. Every phase is marginally uniform on [0, 1).
    """
    b = validate_base(base)
    rng = stream_rng(seed, PARAMETER_STREAM)
    families = list(SAMPLERS)
    members = {f: sum(1 for i in range(n_components) if families[i % len(families)] == f) for f in families}
    offsets = {f: float(rng.random()) for f in families}
    shapes = {
        "lognormal": float(rng.uniform(0.5, 1.5)),
        "pareto": float(rng.uniform(0.5, 3.0)),
        "power_of_uniform": float(rng.uniform(1.0, 4.0)),
    }
    seen = {f: 0 for f in families}

    components = []
    for i in range(n_components):
        family = families[i % len(families)]
        phase = (offsets[family] + seen[family] / members[family]) % 1.0
        seen[family] += 1
        decade = int(rng.integers(-3, 4))
        scale = float(b) ** (decade + phase)
        if family == "uniform":
            params = {"T": scale}
        elif family == "exponential":
            params = {"rate": 1.0 / scale}
        elif family == "lognormal":
            params = {"mu": math.log(scale), "sigma": shapes["lognormal"]}
        elif family == "pareto":
            params = {"xm": scale, "a": shapes["pareto"]}
        else:
            params = {"a": shapes["power_of_uniform"], "scale": scale, "base": b}
        components.append(MixtureComponent(sampler=family, params=params))
    return MixtureSpec(components=components, samples_per_component=samples_per_component, seed=seed)
