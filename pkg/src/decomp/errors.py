"""Exception hierarchy shared by every stage of the analysis."""

from __future__ import annotations


class DecompError(Exception):
    """Base class for all structured errors raised by the library.

    ``span`` is the source location the error refers to, when one exists.
    """

    def __init__(self, message: str, span=None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        if self.span is None:
            return self.message
        return f"{self.span.line}:{self.span.column}: {self.message}"


class LexError(DecompError):
    pass


class ParseError(DecompError):
    pass


class SemanticError(DecompError):
    pass


class InlineError(DecompError):
    pass


class NoGoalsError(DecompError):
    """The program prints nothing, so there is nothing to decompose."""


class RefineConflict(DecompError):
    pass


class WeightError(DecompError):
    pass


class InterpreterError(DecompError):
    pass
