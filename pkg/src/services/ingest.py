"""
Dataset ingestion and the first-digit conformance report of a dataset.

Input is either one value per line or a CSV file with a selected column.
Values are parsed as decimal strings (decimal point only, scientific notation
accepted). Every row ends up either in `Dataset.values` or in
`Dataset.skipped` with one of the reasons in `SKIP_REASONS`.
"""
import io
import logging
import math
import re
from decimal import Decimal, InvalidOperation
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from ..errors import DomainError, EmptyDataError, IngestError
from .digits import benford_pmf_vector, validate_base
from .metrics import chisq_from_counts, empirical_ks, first_digit_counts
from .spread import SpreadReport, SpreadScale, spread_sample

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
SKIP_REASONS = ("empty", "non-numeric", "non-finite", "non-positive", "underflow")
ADVISORY = (
    "Large spread does not imply Benford conformance: a uniform law of any width "
    "stays at KS distance >= 0.1344 from Benford in base 10."
)

_LINE_IN_MESSAGE = re.compile(r"line (\d+)")


# --- Dataset ---
class SkippedRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    line_number: int = Field(..., ge=1, description="1-based line of the row in the input.")
    reason: str = Field(..., description="One of: empty, non-numeric, non-finite, non-positive, underflow.")
    text: str = Field(..., description="The raw cell text.")


class Dataset(BaseModel):
    """
    Pydantic model for the usable values of an input and the rows rejected on the way.
    """
    values: List[float] = Field(..., description="Strictly positive finite values, in input order.")
    leading_digits: List[int] = Field(
        default_factory=list,
        description="First significant digits read from the decimal text, aligned with `values`.",
    )
    source: str = Field(..., description="File path, '<stdin>' or '<request>'.")
    total_rows: int = Field(..., ge=0, description="Rows seen; equals len(values) + len(skipped).")
    skipped: List[SkippedRow] = Field(default_factory=list)

    def skipped_counts(self) -> Dict[str, int]:
        counts = {reason: 0 for reason in SKIP_REASONS}
        for row in self.skipped:
            counts[row.reason] += 1
        return counts


def _leading_digit(value: Decimal) -> int:
    # the coefficient tuple carries no leading zeros
    return value.as_tuple().digits[0]


def _classify(text: str):
    """(float value, leading digit) for a usable cell, or the skip reason as a string."""
    cell = text.strip()
    if not cell:
        return "empty"
    try:
        value = Decimal(cell)
    except InvalidOperation:
        return "non-numeric"
    if not value.is_finite():
        return "non-finite"
    if value <= 0:
        return "non-positive"
    x = float(value)
    if not math.isfinite(x):
        return "non-finite"
    if x == 0.0:
        # positive, but below the smallest double
        return "underflow"
    return x, _leading_digit(value)


def _collect(cells: Sequence[str], line_numbers: Sequence[int], source: str) -> Dataset:
    values, digits, skipped = [], [], []
    for text, line in zip(cells, line_numbers):
        outcome = _classify(text)
        if isinstance(outcome, str):
            skipped.append(SkippedRow(line_number=line, reason=outcome, text=text))
            continue
        values.append(outcome[0])
        digits.append(outcome[1])
    if skipped:
        logger.info("%s: skipped %d of %d rows", source, len(skipped), len(cells))
    return Dataset(values=values, leading_digits=digits, source=source, total_rows=len(cells), skipped=skipped)


def parse_lines(text: str, source: str = "<stdin>") -> Dataset:
    """One value per line; a trailing newline does not start a row."""
    lines = text.splitlines()
    return _collect(lines, range(1, len(lines) + 1), source)


def _select_column(frame: pd.DataFrame, column: str) -> pd.Series:
    if column in frame.columns:
        return frame[column]
    if column.lstrip("-").isdigit():
        index = int(column)
        if -len(frame.columns) <= index < len(frame.columns):
            return frame.iloc[:, index]
    raise IngestError(f"column {column!r} not found; available: {', '.join(map(str, frame.columns))}")


def parse_csv(buffer: Union[str, io.TextIOBase], column: str, source: str) -> Dataset:
    """
    Reads a CSV with a header row and ingests one column.

    Args:
        buffer: Path or text stream handed to `pandas.read_csv`.
        column (str): Column name, or a 0-based index when no column has that name.
        source (str): Label recorded in the dataset.

    Raises:
        IngestError: For malformed CSV (with the line number pandas reports) or
            an unknown column.
    """
    try:
        frame = pd.read_csv(buffer, dtype=str, keep_default_na=False, skip_blank_lines=False)
    except pd.errors.EmptyDataError:
        return Dataset(values=[], source=source, total_rows=0)
    except pd.errors.ParserError as e:
        match = _LINE_IN_MESSAGE.search(str(e))
        line = int(match.group(1)) if match else None
        raise IngestError(f"{source}: malformed CSV: {e}", line_number=line) from e
    except OSError as e:
        raise IngestError(f"cannot read {source}: {e}") from e
    # short rows, blank lines included, are padded with NaN
    cells = _select_column(frame, column).fillna("").astype(str).tolist()
    # header is line 1
    return _collect(cells, range(2, len(cells) + 2), source)


def load_dataset(path: Optional[str] = None, column: Optional[str] = None,
                 stream: Optional[io.TextIOBase] = None) -> Dataset:
    """
    Ingests a file, or `stream` (stdin) when `path` is None or '-'.

    Raises:
        IngestError: If the file cannot be read or parsed.
    """
    from_stream = path is None or path == "-"
    source = "<stdin>" if from_stream else str(path)
    try:
        if from_stream:
            text = stream.read()
        elif column is None:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
    except OSError as e:
        raise IngestError(f"cannot read {source}: {e}") from e

    if column is None:
        return parse_lines(text, source)
    return parse_csv(io.StringIO(text) if from_stream else path, column, source)


def dataset_from_values(values: Sequence[float], source: str = "<request>") -> Dataset:
    """Dataset from already-numeric values; rows are numbered from 1."""
    return _collect([repr(float(v)) for v in values], range(1, len(values) + 1), source)


# --- Conformance report ---
class DigitRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    digit: int
    count: int
    frequency: float
    benford_pmf: float


class ConformanceReport(BaseModel):
    """
    Pydantic model for the first-digit conformance report of a dataset.
    """
    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    source: str
    base: int
    n: int = Field(..., description="Values analysed.")
    total_rows: int
    skipped: int
    skipped_reasons: Dict[str, int]
    digits_from_text: bool = Field(..., description="Whether first digits come from the decimal text.")
    first_digits: List[DigitRow]
    empirical_ks: float = Field(..., description="KS distance of frac(log_b x) from uniform.")
    chisq: float
    dof: int
    spread_raw: Optional[SpreadReport] = Field(None, description="Absent for a single value.")
    spread_log: Optional[SpreadReport] = Field(None, description="Absent for a single value.")
    advisory: str = ADVISORY


def analyze_dataset(dataset: Dataset, base: int = 10, alpha: float = 0.25,
                    digits_from_text: bool = False) -> ConformanceReport:
    """
    First-digit frequencies, empirical KS, chi-square and spread of a dataset.

    Raises:
        EmptyDataError: If no usable value is left.
        DomainError: If `digits_from_text` is requested for a base other than 10.
    """
    b = validate_base(base)
    if not dataset.values:
        raise EmptyDataError(f"{dataset.source}: no usable values ({len(dataset.skipped)} rows skipped)")
    if digits_from_text and b != 10:
        raise DomainError("--digits-from-text reads decimal text and needs base 10")

    x = np.asarray(dataset.values, dtype=np.float64)
    if digits_from_text:
        counts = np.bincount(np.asarray(dataset.leading_digits, dtype=np.int64), minlength=b)[1:b]
    else:
        counts = first_digit_counts(x, b)
    chi = chisq_from_counts(counts, b)
    pmf = benford_pmf_vector(b)
    n = x.size
    rows = [
        DigitRow(digit=d, count=int(counts[d - 1]), frequency=float(counts[d - 1]) / n, benford_pmf=float(pmf[d - 1]))
        for d in range(1, b)
    ]
    spread_raw = spread_log = None
    if n >= 2:
        spread_raw = spread_sample(x, SpreadScale.RAW, alpha, b)
        spread_log = spread_sample(x, SpreadScale.LOG, alpha, b)

    return ConformanceReport(
        source=dataset.source,
        base=b,
        n=n,
        total_rows=dataset.total_rows,
        skipped=len(dataset.skipped),
        skipped_reasons=dataset.skipped_counts(),
        digits_from_text=digits_from_text,
        first_digits=rows,
        empirical_ks=empirical_ks(x, b),
        chisq=chi.statistic,
        dof=chi.dof,
        spread_raw=spread_raw,
        spread_log=spread_log,
    )
