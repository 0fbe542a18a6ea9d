"""
Exact distributions of frac(log_b X) on [0, 1) for a closed family of
analytic positive distributions.

A positive X is Benford in base b exactly when frac(log_b X) is uniform on
[0, 1), so the mod-1 CDF built here is what every distance in `metrics` is
measured on. Each CDF is stored as a piece table: on [x_i, x_{i+1}) it equals
c1 * b**s + c2 * s + c3. That family is closed under every construction in
this module (decade folding, wrapping, shifting, atoms), which lets the
distance code locate extrema by calculus instead of a grid search.
"""
import logging
import math
from typing import Annotated, List, Literal, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config import settings
from ..errors import CapacityError, DomainError
from .digits import Base, log_base, significand, significands, validate_base

logger = logging.getLogger(__name__)


# --- Analytic distributions ---
class UniformContinuous(BaseModel):
    """
    Uniform distribution on (0, T).
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["uniform"] = "uniform"
    T: float = Field(..., gt=0, description="Upper end of the support (0, T).")

    def support(self):
        return 0.0, self.T

    def cdf(self, x):
        return np.clip(np.asarray(x, dtype=np.float64) / self.T, 0.0, 1.0)

    def quantile(self, p):
        return np.asarray(p, dtype=np.float64) * self.T

    @property
    def mean(self) -> float:
        return self.T / 2.0

    @property
    def variance(self) -> float:
        return self.T ** 2 / 12.0

    def transform(self, u: np.ndarray) -> np.ndarray:
        return self.T * u


class PowerOfUniform(BaseModel):
    """
    X = b**(a*Y) with Y uniform on (0, 1); a = 1 gives an exactly Benford variable.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["power_of_uniform"] = "power_of_uniform"
    a: float = Field(..., gt=0, description="Exponent scale a > 0.")
    base: Base = Field(10, description="Radix b the exponent is taken in.")

    def support(self):
        return 1.0, float(self.base) ** self.a

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            y = np.log(np.maximum(x, 1.0)) / (self.a * math.log(self.base))
        return np.clip(y, 0.0, 1.0)

    def quantile(self, p):
        return np.power(float(self.base), self.a * np.asarray(p, dtype=np.float64))

    @property
    def mean(self) -> float:
        c = self.a * math.log(self.base)
        return math.expm1(c) / c

    @property
    def variance(self) -> float:
        c = self.a * math.log(self.base)
        second = math.expm1(2.0 * c) / (2.0 * c)
        return second - self.mean ** 2

    def transform(self, u: np.ndarray) -> np.ndarray:
        return np.power(float(self.base), self.a * u)


class BenfordDecade(BaseModel):
    """
    Density 1/(x ln b) on the decade (b**k, b**(k+1)).
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["benford_decade"] = "benford_decade"
    k: int = Field(..., description="Decade index; the support is (b**k, b**(k+1)).")
    base: Base = Field(10, description="Radix b of the decade.")

    def support(self):
        b = float(self.base)
        return b ** self.k, b ** (self.k + 1)

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        lo, _ = self.support()
        with np.errstate(divide="ignore", invalid="ignore"):
            y = np.log(np.maximum(x, lo)) / math.log(self.base) - self.k
        return np.clip(y, 0.0, 1.0)

    def quantile(self, p):
        return np.power(float(self.base), self.k + np.asarray(p, dtype=np.float64))

    @property
    def mean(self) -> float:
        b = float(self.base)
        return b ** self.k * (b - 1.0) / math.log(b)

    @property
    def variance(self) -> float:
        b = float(self.base)
        second = b ** (2 * self.k) * (b * b - 1.0) / (2.0 * math.log(b))
        return second - self.mean ** 2

    def transform(self, u: np.ndarray) -> np.ndarray:
        return np.power(float(self.base), self.k + u)


class UniformIntegers(BaseModel):
    """
    Uniform distribution on the integers {1, ..., N}.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["uniform_integers"] = "uniform_integers"
    N: int = Field(..., ge=1, description="Largest integer of the support {1, ..., N}.")

    def support(self):
        return 1.0, float(self.N)

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.clip(np.floor(x) / self.N, 0.0, 1.0)

    def quantile(self, p):
        p = np.asarray(p, dtype=np.float64)
        return np.clip(np.ceil(p * self.N), 1, self.N)

    @property
    def mean(self) -> float:
        return (self.N + 1) / 2.0

    @property
    def variance(self) -> float:
        return (self.N ** 2 - 1) / 12.0

    def transform(self, u: np.ndarray) -> np.ndarray:
        return np.clip(np.ceil(u * self.N), 1, self.N)


AnalyticDistribution = Annotated[
    Union[UniformContinuous, PowerOfUniform, BenfordDecade, UniformIntegers],
    Field(discriminator="kind"),
]


def native_base(dist, default: Optional[int] = None) -> int:
    """The radix a distribution is defined in, or `default` (settings.BASE) when it has none."""
    own = getattr(dist, "base", None)
    if own is not None:
        return own
    return default if default is not None else settings.BASE


# --- Mod-1 CDF ---
class Piece(BaseModel):
    """
    Closed-form descriptor c1 * b**s + c2 * s + c3 of one CDF piece.
    """
    model_config = ConfigDict(frozen=True)

    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0


class ModOneCdf(BaseModel):
    """
    Pydantic model for the CDF of a random phase on [0, 1).

    The CDF is right-continuous; piece i is valid on [breakpoints[i], breakpoints[i+1]).
    Step CDFs (atoms) use constant pieces, so F(0) equals the mass sitting at 0.
    """
    model_config = ConfigDict(frozen=True)

    base: Base = Field(..., description="Radix b of the b**s term of every piece.")
    breakpoints: List[float] = Field(..., min_length=2, description="Sorted partition of [0, 1].")
    pieces: List[Piece] = Field(..., min_length=1, description="One descriptor per partition interval.")
    kind: Literal["continuous", "step"] = "continuous"

    @model_validator(mode="after")
    def _check_partition(self):
        bp = self.breakpoints
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(u >= v for u, v in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(self.pieces) != len(bp) - 1:
            raise ValueError("need exactly one piece per breakpoint interval")
        return self

    def piece_value(self, i: int, s):
        p = self.pieces[i]
        return p.c1 * np.power(float(self.base), s) + p.c2 * s + p.c3

    def _coefficients(self):
        c = np.array([[p.c1, p.c2, p.c3] for p in self.pieces], dtype=np.float64)
        return c[:, 0], c[:, 1], c[:, 2]

    def _evaluate(self, s, side: str):
        s = np.asarray(s, dtype=np.float64)
        c1, c2, c3 = self._coefficients()
        idx = np.searchsorted(self.breakpoints, s, side=side) - 1
        idx = np.clip(idx, 0, len(self.pieces) - 1)
        value = c1[idx] * np.power(float(self.base), s) + c2[idx] * s + c3[idx]
        value = np.clip(value, 0.0, 1.0)
        below = (s < 0.0) if side == "right" else (s <= 0.0)
        above = (s >= 1.0) if side == "right" else (s > 1.0)
        value = np.where(below, 0.0, np.where(above, 1.0, value))
        return value if value.ndim else float(value)

    def evaluate(self, s):
        """F(s), vectorized over numpy arrays."""
        return self._evaluate(s, "right")

    def left_limit(self, s):
        """F(s-), the left-hand limit; equals F(s) for continuous CDFs."""
        return self._evaluate(s, "left")

    def to_json(self) -> str:
        """Serializes the piece table {base, breakpoints, pieces, kind}."""
        return self.model_dump_json()

    @classmethod
    def from_json(cls, payload: str) -> "ModOneCdf":
        return cls.model_validate_json(payload)


def uniform_cdf(base: int = 10) -> ModOneCdf:
    """The Benford reference: F(s) = s."""
    return ModOneCdf(base=validate_base(base), breakpoints=[0.0, 1.0], pieces=[Piece(c2=1.0)])


def uniform_phase_cdf(theta: float, base: int = 10) -> ModOneCdf:
    """
    Mod-1 CDF of log_b X for X uniform on (0, b**(m + theta)), any integer m.

    Decade folding: the full decades below 1 contribute (b**s - 1)/(b - 1),
    the partial top decade contributes min(b**s, b**theta) - 1, and the total
    is normalized by b**theta.

    Args:
        theta (float): Phase frac(log_b T); reduced mod 1.
        base (int, optional): Radix. Defaults to 10.
    """
    b = validate_base(base)
    theta = theta % 1.0
    if theta >= 1.0:
        # tiny negative phases round up to 1.0
        theta = 0.0
    scale = float(b) ** theta
    geometric = 1.0 / ((b - 1) * scale)
    upper = Piece(c1=geometric, c3=(scale - b / (b - 1)) / scale)
    if theta == 0.0:
        return ModOneCdf(base=b, breakpoints=[0.0, 1.0], pieces=[upper])
    lower = Piece(c1=b * geometric, c3=-b * geometric)
    return ModOneCdf(base=b, breakpoints=[0.0, theta, 1.0], pieces=[lower, upper])


def _fold(L: float, H: float, A: float, B: float, exponential: bool, b: int) -> ModOneCdf:
    """
    Mod-1 CDF of W on (L, H) where G(W) is uniform on (A, B) = (G(L), G(H)).

    G(w) = b**w when `exponential` (W = log_b of a uniform variable) and
    G(w) = w otherwise (W itself uniform, i.e. wrapping around the circle).
    Only the two edge decades are partial; the full decades in between are
    summed in closed form.
    """
    G = (lambda t: float(b) ** t) if exponential else (lambda t: float(t))
    total = B - A
    m_lo = math.floor(L)
    m_hi = max(math.ceil(H) - 1, m_lo)
    cuts = {0.0, 1.0, L - m_lo, H - math.floor(H)}
    bp = sorted(c for c in cuts if 0.0 <= c <= 1.0)

    if m_hi - m_lo >= 2:
        if exponential:
            full = (float(b) ** m_hi - float(b) ** (m_lo + 1)) / (b - 1)
        else:
            full = float(m_hi - m_lo - 1)
    else:
        full = 0.0
    edges = [m_lo] if m_hi == m_lo else [m_lo, m_hi]

    pieces = []
    for u, v in zip(bp, bp[1:]):
        mid = 0.5 * (u + v)
        c1 = c2 = c3 = 0.0
        if exponential:
            c1, c3 = full, -full
        else:
            c2 = full
        for m in edges:
            lower = max(m, L)
            lower_val = A if L >= m else G(m)
            if m + mid <= lower:
                continue
            if m + mid < H:
                if exponential:
                    c1 += float(b) ** m
                    c3 -= lower_val
                else:
                    c2 += 1.0
                    c3 += m - lower_val
            else:
                c3 += B - lower_val
        pieces.append(Piece(c1=c1 / total, c2=c2 / total, c3=c3 / total))
    return ModOneCdf(base=b, breakpoints=bp, pieces=pieces)


def uniform_interval_mod_one(lo: float, hi: float, base: int = 10) -> ModOneCdf:
    """
    Exact mod-1 CDF of log_b V for V uniform on (lo, hi), 0 < lo < hi.

    Raises:
        DomainError: If the interval is empty or touches 0.
    """
    b = validate_base(base)
    if not (0.0 < lo < hi) or not math.isfinite(hi):
        raise DomainError(f"need 0 < lo < hi < inf, got ({lo}, {hi})")
    return _fold(log_base(lo, b), log_base(hi, b), lo, hi, exponential=True, b=b)


def wrapped_uniform_cdf(lo: float, hi: float, base: int = 10) -> ModOneCdf:
    """CDF of frac(W) for W uniform on (lo, hi); piecewise linear."""
    b = validate_base(base)
    if not lo < hi:
        raise DomainError(f"need lo < hi, got ({lo}, {hi})")
    return _fold(lo, hi, lo, hi, exponential=False, b=b)


def atoms_cdf(positions: Sequence[float], masses: Sequence[float], base: int = 10) -> ModOneCdf:
    """
    Step CDF with the given atoms on [0, 1).

    Args:
        positions (Sequence[float]): Sorted, distinct atom positions in [0, 1).
        masses (Sequence[float]): Matching probabilities summing to 1.
    """
    b = validate_base(base)
    positions = np.asarray(positions, dtype=np.float64)
    cumulative = np.cumsum(np.asarray(masses, dtype=np.float64))
    cumulative = cumulative / cumulative[-1]
    inner = positions[positions > 0.0]
    bp = np.concatenate(([0.0], inner, [1.0]))
    counts = np.searchsorted(positions, bp[:-1], side="right")
    values = np.where(counts > 0, cumulative[np.maximum(counts - 1, 0)], 0.0)
    pieces = [Piece(c3=float(v)) for v in values]
    return ModOneCdf(base=b, breakpoints=[float(x) for x in bp], pieces=pieces, kind="step")


def _integer_atoms(N: int, b: int) -> ModOneCdf:
    if N > settings.MAX_ATOMS:
        raise CapacityError(
            f"UniformIntegers({N}) exceeds the exact atom budget of {settings.MAX_ATOMS}; "
            "use audit.leading_one_fraction for counting questions at this size"
        )
    s, _ = significands(np.arange(1, N + 1, dtype=np.float64), b)
    if b == 10:
        positions = np.log10(s)
    elif b == 2:
        positions = np.log2(s)
    else:
        positions = np.log(s) / math.log(b)
    positions = np.minimum(positions, np.nextafter(1.0, 0.0))
    unique, counts = np.unique(positions, return_counts=True)
    logger.debug("UniformIntegers(%d) folded into %d distinct atoms", N, unique.size)
    return atoms_cdf(unique, counts / N, b)


def log_mod_one(dist, base: Optional[int] = None) -> ModOneCdf:
    """
    Exact CDF of frac(log_b X) for an analytic distribution.

    Args:
        dist (AnalyticDistribution): One of the four analytic variants.
        base (int, optional): Radix of the logarithm. Defaults to the
            distribution's own base (10 for the variants without one).

    Returns:
        ModOneCdf: Piece table of the mod-1 law.

    Raises:
        CapacityError: For UniformIntegers(N) above the atom budget.
    """
    b = validate_base(native_base(dist) if base is None else base)

    if isinstance(dist, UniformContinuous):
        theta = log_base(significand(dist.T, b).s, b)
        return uniform_phase_cdf(min(theta, math.nextafter(1.0, 0.0)), b)

    if isinstance(dist, PowerOfUniform):
        span = dist.a if dist.base == b else dist.a * math.log(dist.base) / math.log(b)
        nearest = round(span)
        if nearest >= 1 and abs(span - nearest) <= 1e-12 * span:
            return uniform_cdf(b)
        return wrapped_uniform_cdf(0.0, span, b)

    if isinstance(dist, BenfordDecade):
        if dist.base == b:
            return uniform_cdf(b)
        c = math.log(dist.base) / math.log(b)
        return wrapped_uniform_cdf(dist.k * c, (dist.k + 1) * c, b)

    if isinstance(dist, UniformIntegers):
        return _integer_atoms(dist.N, b)

    raise DomainError(f"unsupported distribution {dist!r}")


def shift_mod_one(cdf: ModOneCdf, delta: float) -> ModOneCdf:
    """
    CDF of frac(S + delta) for S distributed by `cdf`.

    Multiplying X by c shifts frac(log_b X) by frac(log_b c), so this is the
    mod-1 picture of a change of scale. Wrapping is done on the piece
    descriptors, so the result stays exact.

    Args:
        cdf (ModOneCdf): Law of S.
        delta (float): Shift; reduced mod 1.
    """
    d = delta % 1.0
    if d == 0.0:
        return cdf
    b = cdf.base
    pivot = 1.0 - d
    carried = float(cdf.left_limit(pivot))

    cuts = {0.0, 1.0, d}
    for x in cdf.breakpoints[:-1]:
        y = x + d if x < pivot else x - pivot
        if 0.0 <= y < 1.0:
            cuts.add(y)
    bp = sorted(cuts)

    pieces = []
    for u, v in zip(bp, bp[1:]):
        mid = 0.5 * (u + v)
        if mid < d:
            t, offset = pivot, -carried
        else:
            t, offset = -d, 1.0 - carried
        i = int(np.clip(np.searchsorted(cdf.breakpoints, mid + t, side="right") - 1, 0, len(cdf.pieces) - 1))
        p = cdf.pieces[i]
        pieces.append(Piece(
            c1=p.c1 * float(b) ** t,
            c2=p.c2,
            c3=p.c2 * t + p.c3 + offset,
        ))
    return ModOneCdf(base=b, breakpoints=bp, pieces=pieces, kind=cdf.kind)


# --- Monte Carlo oracle ---
def stream_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """
    Deterministic generator for (seed, stream).

    Streams are split with SeedSequence([seed, stream]); concurrent samplers
    sharing a seed must use distinct stream indices.
    """
    return np.random.default_rng(np.random.SeedSequence([seed % 2 ** 64, stream]))


def open_uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    """n uniforms on the open interval (0, 1)."""
    u = rng.random(n)
    u[u == 0.0] = 2.0 ** -54
    return u


def sample(dist, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """
    Draws n i.i.d. values by inverse-CDF sampling.

    Args:
        dist (AnalyticDistribution): Distribution to sample.
        n (int): Number of draws, n >= 1.
        seed (int): 64-bit seed; identical seeds give identical output.
        stream (int, optional): Stream index for concurrent sampling. Defaults to 0.

    Returns:
        np.ndarray: Strictly positive float64 draws.
    """
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    return dist.transform(open_uniform(stream_rng(seed, stream), n)).astype(np.float64)
