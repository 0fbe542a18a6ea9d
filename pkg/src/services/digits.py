"""
Base-b significand and digit extraction plus the Benford digit law.

Every other service speaks in terms of these helpers: the significand
s in [1, b) with x = s * b**e, its floor (the first significant digit) and
the logarithmic digit law log_b(1 + 1/D).

The joint law of a leading digit block, `benford_block_pmf`, uses the
closed form log_b(1 + 1/D) from the significant-digit literature, with D
the block read as a base-b integer.
"""
import math
from typing import Annotated, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import DomainError

Base = Annotated[int, Field(ge=2, description="Integer radix b >= 2.")]

# Values this many ulps (of b) below b are treated as the next power of b.
SNAP_ULPS = 4


class Significand(BaseModel):
    """
    Pydantic model for the normalized representation x = s * b**exponent.
    """
    model_config = ConfigDict(frozen=True)

    s: float = Field(..., ge=1, description="Significand in [1, b).")
    exponent: int = Field(..., description="Integer exponent e with x = s * b**e.")


def validate_base(base: int) -> int:
    """
    Checks that `base` is an integer radix of at least 2.

    Raises:
        DomainError: If the base is not an integer or is smaller than 2.
    """
    if isinstance(base, bool) or not isinstance(base, (int, np.integer)):
        raise DomainError(f"base must be an integer, got {base!r}")
    if base < 2:
        raise DomainError(f"base must be >= 2, got {base}")
    return int(base)


def log_base(x: float, base: int) -> float:
    """Logarithm of `x` in `base`, using the dedicated routines for 10 and 2."""
    if base == 10:
        return math.log10(x)
    if base == 2:
        return math.log2(x)
    return math.log(x) / math.log(base)


def _snap(s: float, e: int, base: int) -> Tuple[float, int]:
    if s >= base:
        s, e = s / base, e + 1
    elif s < 1.0:
        s, e = s * base, e - 1
    if base - s <= SNAP_ULPS * math.ulp(float(base)):
        s, e = 1.0, e + 1
    return s, e


def _int_significand(x: int, base: int) -> Significand:
    # int / int true division is correctly rounded, so s is exact up to one rounding.
    e = max(int(math.log(x, base)), 0)
    while base ** e > x:
        e -= 1
    while base ** (e + 1) <= x:
        e += 1
    s = x / base ** e
    if s >= base:
        # the quotient rounded up; x // base**e is still at most b - 1
        s = math.nextafter(float(base), 0.0)
    return Significand(s=s, exponent=e)


def _scale_up(x: float, base: int, n: int) -> float:
    """x * base**n for n >= 0, in two factors so that b**n itself never overflows."""
    half = n // 2
    return x * float(base) ** (n - half) * float(base) ** half


def significand(x: float, base: int = 10) -> Significand:
    """
    Splits a positive real into significand and exponent in the given base.

    Args:
        x (float): Strictly positive, finite value. Python integers of any size
            are handled with exact integer arithmetic.
        base (int, optional): Radix b >= 2. Defaults to 10.

    Returns:
        Significand: (s, e) with x = s * b**e and 1 <= s < b.

    Raises:
        DomainError: If `x` is non-positive or not finite.
    """
    b = validate_base(base)
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        if x <= 0:
            raise DomainError(f"significand needs x > 0, got {x}")
        return _int_significand(int(x), b)

    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"significand needs a finite x > 0, got {x}")

    if b == 2:
        m, ex = math.frexp(x)
        return Significand(s=2.0 * m, exponent=ex - 1)

    e = math.floor(log_base(x, b))
    s = x / float(b) ** e if e >= 0 else _scale_up(x, b, -e)
    s, e = _snap(s, e, b)
    return Significand(s=s, exponent=e)


def significands(values, base: int = 10) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorized `significand` for arrays of positive floats.

    Args:
        values: Array-like of strictly positive finite values.
        base (int, optional): Radix. Defaults to 10.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Significands (float) and exponents (int).

    Raises:
        DomainError: Naming the index of the first non-positive or non-finite value.
    """
    b = validate_base(base)
    x = np.asarray(values, dtype=np.float64)
    bad = ~np.isfinite(x) | (x <= 0)
    if bad.any():
        i = int(np.argmax(bad))
        raise DomainError(f"value at index {i} is not a finite positive number: {x[i]!r}", index=i)

    if b == 2:
        m, ex = np.frexp(x)
        return 2.0 * m, (ex - 1).astype(np.int64)

    e = np.floor(np.log(x) / math.log(b))
    up = np.maximum(-e, 0.0)
    half = np.floor(up / 2.0)
    with np.errstate(over="ignore", under="ignore"):
        s = np.where(
            e >= 0,
            x / np.power(float(b), np.maximum(e, 0.0)),
            x * np.power(float(b), up - half) * np.power(float(b), half),
        )
    high = s >= b
    s = np.where(high, s / b, s)
    e = np.where(high, e + 1, e)
    low = s < 1.0
    s = np.where(low, s * b, s)
    e = np.where(low, e - 1, e)
    near = (b - s) <= SNAP_ULPS * math.ulp(float(b))
    s = np.where(near, 1.0, s)
    e = np.where(near, e + 1, e)
    return s, e.astype(np.int64)


def first_digit(x: float, base: int = 10) -> int:
    """First significant digit of `x`, an integer in [1, b - 1]."""
    return int(math.floor(significand(x, base).s))


def first_digits(values, base: int = 10) -> np.ndarray:
    """Vectorized `first_digit`."""
    s, _ = significands(values, base)
    return np.floor(s).astype(np.int64)


def benford_first_digit_pmf(d: int, base: int = 10) -> float:
    """
    Benford probability that the first significant digit equals `d`.

    Args:
        d (int): Digit in [1, b - 1].
        base (int, optional): Radix. Defaults to 10.

    Returns:
        float: log_b(1 + 1/d).

    Raises:
        DomainError: If `d` lies outside [1, b - 1].
    """
    b = validate_base(base)
    if not 1 <= d <= b - 1:
        raise DomainError(f"first digit must lie in [1, {b - 1}], got {d}")
    return math.log1p(1.0 / d) / math.log(b)


def benford_pmf_vector(base: int = 10) -> np.ndarray:
    """Benford first-digit probabilities for d = 1..b-1, indexed from digit 1."""
    b = validate_base(base)
    d = np.arange(1, b, dtype=np.float64)
    return np.log1p(1.0 / d) / math.log(b)


def benford_block_pmf(digits: Sequence[int], base: int = 10) -> float:
    """
    Probability that the leading significant digits equal `digits`.

    Args:
        digits (Sequence[int]): Nonempty digit block; first digit in [1, b - 1],
            the following ones in [0, b - 1].
        base (int, optional): Radix. Defaults to 10.

    Returns:
        float: log_b(1 + 1/D), D the block read as a base-b integer.

    Raises:
        DomainError: For an empty block or a digit out of range.
    """
    b = validate_base(base)
    if len(digits) == 0:
        raise DomainError("digit block must be nonempty")
    if not 1 <= digits[0] <= b - 1:
        raise DomainError(f"leading digit must lie in [1, {b - 1}], got {digits[0]}")
    block = 0
    for position, d in enumerate(digits):
        if position > 0 and not 0 <= d <= b - 1:
            raise DomainError(f"digit at position {position} must lie in [0, {b - 1}], got {d}")
        block = block * b + int(d)
    return math.log1p(1.0 / block) / math.log(b)
