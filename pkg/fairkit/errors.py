"""Exception types raised by fairkit."""

from typing import List, Optional, Sequence, Tuple


class FairkitError(Exception):
    """Base error; carries the process exit code used by the CLI."""

    def __init__(self, message: str, exit_code: int = 1):
        self.message = message
        self.exit_code = exit_code
        super().__init__(message)


class DegenerateDenominator(FairkitError, ValueError):
    """A metric's denominator is zero for this group."""


class EmptyGroup(FairkitError, ValueError):
    """A group has no records at all."""


class DomainError(FairkitError, ValueError):
    """An argument lies outside the domain of a formula or test."""


class MissingScore(FairkitError):
    """A record needed by a score-based operation has no score."""


class DegenerateGroup(FairkitError):
    """A group has only actual positives or only actual negatives."""


class FileError(FairkitError):
    """An input file is missing or unreadable."""


class SchemaError(FairkitError):
    """The CSV schema cannot be resolved against the file."""

    def __init__(self, message: str, column: Optional[str] = None):
        self.column = column
        super().__init__(message)


class ParseError(FairkitError):
    """One or more CSV rows could not be parsed."""

    def __init__(self, rows: Sequence[Tuple[int, str]]):
        self.rows: List[Tuple[int, str]] = list(rows)
        shown = "; ".join(f"row {row}: {msg}" for row, msg in self.rows[:10])
        more = f" (+{len(self.rows) - 10} more)" if len(self.rows) > 10 else ""
        super().__init__(f"{len(self.rows)} malformed row(s): {shown}{more}")


class SpecError(FairkitError):
    """A synthetic-data spec is invalid."""


class FixtureError(FairkitError):
    """A bundled fixture is unknown or fails its integrity check."""


class TheoremViolation(FairkitError):
    """The mutual-exclusivity tripwire fired; always an implementation bug."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)
