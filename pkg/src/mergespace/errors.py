"""Exception types shared across the package."""

from __future__ import annotations


class MergespaceError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidTreeError(MergespaceError):
    """A merge tree violates a structural invariant.

    Carries the full list of violation messages so callers can report them
    without re-running validation.
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("invalid merge tree: " + "; ".join(self.violations))


class InvalidMatrixError(MergespaceError):
    """A matrix fails a precondition (symmetry, validity, shape, finiteness)."""


class MalformedMapError(MergespaceError):
    """A vertex map is structurally broken (missing images, foreign points)."""


class FormatError(MergespaceError):
    """A text artifact cannot be parsed.  Optionally carries a line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceededError(MergespaceError):
    """A search exceeded its state budget and was stopped before answering."""

    def __init__(self, budget):
        self.budget = budget
        super().__init__(f"search budget of {budget} states exceeded")
