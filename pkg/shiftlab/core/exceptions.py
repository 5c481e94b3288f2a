"""
Custom exceptions for the shiftlab workbench.
"""

from typing import Iterable, Optional, Sequence


class ShiftLabError(Exception):
    """Base exception for all shiftlab errors."""

    def __init__(self, message: str, error_code: Optional[str] = None) -> None:
        super().__init__(message)
        self.message = message
        self.error_code = error_code


class ConfigurationError(ShiftLabError):
    """Raised when there's an error with configuration loading or validation."""
    pass


class UsageError(ShiftLabError):
    """Raised for malformed command lines or manifests."""
    pass


class CommandExecutionError(ShiftLabError):
    """Raised when there's an error executing a subcommand."""
    pass


class SpecError(ShiftLabError):
    """Base class for speclang diagnostics; always carries a position."""

    def __init__(self, message: str, line: int, column: int, error_code: Optional[str] = None) -> None:
        super().__init__(f"{line}:{column}: {message}", error_code)
        self.line = line
        self.column = column
        self.reason = message


class SpecSyntaxError(SpecError):
    """Raised when a spec text does not match the grammar."""

    def __init__(self, message: str, line: int, column: int, expected: Iterable[str] = ()) -> None:
        self.expected = tuple(expected)
        if self.expected:
            message = f"{message} (expected {', '.join(self.expected)})"
        super().__init__(message, line, column, error_code="syntax")


class SpecSemanticError(SpecError):
    """Raised when a well-formed spec violates a domain rule."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(message, line, column, error_code="semantic")


class ParameterError(ShiftLabError):
    """Raised when a numeric parameter lies outside its domain."""
    pass


class AlphabetError(ShiftLabError):
    """Raised when an operation receives symbols of the wrong kind."""
    pass


class LengthMismatchError(ShiftLabError):
    """Raised when two words must have equal length and do not."""
    pass


class BudgetExceededError(ShiftLabError):
    """Raised when an enumeration, stream or memory budget would be exceeded."""

    def __init__(self, message: str, required: Optional[int] = None, limit: Optional[int] = None) -> None:
        super().__init__(message, error_code="budget")
        self.required = required
        self.limit = limit


class ExactCapError(BudgetExceededError):
    """Raised when exact dyadic arithmetic is requested beyond the exact cap."""
    pass


class NotInLanguageError(ShiftLabError):
    """Raised when a word is required to occur and does not."""
    pass


class EmptySubshiftError(ShiftLabError):
    """Raised when a graph has an empty essential part."""
    pass


class CrossCheckError(ShiftLabError):
    """Raised when two independent computations of one quantity disagree."""
    pass


class InsufficientDataError(ShiftLabError):
    """Raised when a prefix, horizon or table is too short for the request."""
    pass


class ContractViolationError(ShiftLabError):
    """Raised when a preimage selector breaks its contract at some node."""

    def __init__(self, message: str, word: Sequence[int]) -> None:
        super().__init__(message, error_code="contract")
        self.word = tuple(word)


class HypothesisViolationError(ShiftLabError):
    """Raised when a marker placement hypothesis is not met."""

    def __init__(self, message: str, index: int) -> None:
        super().__init__(message, error_code="hypothesis")
        self.index = index


class DecompositionError(ShiftLabError):
    """Raised when a prefix cannot be decomposed at the requested stage."""
    pass


class ScheduleError(ShiftLabError):
    """Raised when construction schedule parameters break their invariants."""
    pass


class SampleMismatchError(ShiftLabError):
    """Raised when two partitions live on different samples."""
    pass


class NotFoundError(ShiftLabError):
    """Raised when a bounded search finds nothing; this is never a refutation."""

    def __init__(self, message: str, budget: Optional[int] = None) -> None:
        super().__init__(message, error_code="not-found")
        self.budget = budget
