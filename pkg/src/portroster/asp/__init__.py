"""A small answer-set programming core: parse, check safety, ground, solve."""

from .errors import (
    AspError,
    GroundBudgetError,
    ParseError,
    SolveBudgetError,
    SymbolArithmeticError,
    UnsafeProgramError,
)
from .eval import is_model, reduct
from .ground import GroundingLimits, ground_program, naive_ground
from .parser import parse_program, parse_rule
from .safety import SafetyViolation, check_safety, is_safe
from .solve import SolveLimits, enumerate_answer_sets, is_answer_set
from .syntax import (
    AggregateAtom,
    BuiltinAtom,
    GroundSet,
    Literal,
    Program,
    Rule,
    StandardAtom,
    SymbolicSet,
    Term,
    num,
    sym,
    var,
)

__all__ = [
    "AspError",
    "GroundBudgetError",
    "ParseError",
    "SolveBudgetError",
    "SymbolArithmeticError",
    "UnsafeProgramError",
    "is_model",
    "reduct",
    "GroundingLimits",
    "ground_program",
    "naive_ground",
    "parse_program",
    "parse_rule",
    "SafetyViolation",
    "check_safety",
    "is_safe",
    "SolveLimits",
    "enumerate_answer_sets",
    "is_answer_set",
    "AggregateAtom",
    "BuiltinAtom",
    "GroundSet",
    "Literal",
    "Program",
    "Rule",
    "StandardAtom",
    "SymbolicSet",
    "Term",
    "num",
    "sym",
    "var",
]
