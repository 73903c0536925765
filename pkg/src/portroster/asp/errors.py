"""Exceptions shared across the rule-language components."""

from __future__ import annotations


class AspError(Exception):
    """Base class for every error raised by this subpackage."""


class ParseError(AspError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__("%s (line %d, column %d)" % (message, line, column))
        self.message = message
        self.line = line
        self.column = column


class UnsafeProgramError(AspError):
    def __init__(self, violations):
        self.violations = list(violations)
        detail = "; ".join(str(v) for v in self.violations)
        super().__init__("unsafe program: %s" % detail)


class SymbolArithmeticError(AspError):
    """Raised when + is applied to a symbol constant."""


class GroundBudgetError(AspError):
    """Grounding exceeded the configured rule budget or timeout."""


class SolveBudgetError(AspError):
    """Solving exceeded the configured step budget or timeout.

    Deliberately distinct from an empty answer-set list: callers must be able
    to tell "proved that no answer set exists" apart from "gave up".
    """
