"""Exception hierarchy shared by the library, the CLI and the HTTP app."""
from typing import Optional


class BenfordAuditError(Exception):
    """Base class of every error raised on purpose by this package."""


class DomainError(BenfordAuditError, ValueError):
    """
    An argument lies outside the mathematical domain of an operation.

    Attributes:
        index (Optional[int]): Position of the offending value when the input
            is a sequence of samples.
    """
    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class CapacityError(BenfordAuditError):
    """An exact representation would exceed the configured size budget."""


class ConfigurationError(BenfordAuditError):
    """A run or mixture configuration names something that does not exist."""


class IngestError(BenfordAuditError):
    """
    An input file cannot be parsed.

    Attributes:
        line_number (Optional[int]): 1-based line of the malformed input, when known.
    """
    def __init__(self, message: str, line_number: Optional[int] = None):
        super().__init__(message)
        self.line_number = line_number


class EmptyDataError(BenfordAuditError):
    """No usable value survived ingestion."""
