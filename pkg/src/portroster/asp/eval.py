"""Evaluation of ground constructs against an interpretation.

An interpretation is a set of ground standard atoms.  Aggregate evaluation
follows the multiset reading: the instantiated set term contributes, for each
pair whose conjunction is fully true, the first constant of the pair; #sum of
an empty multiset is 0, while #min/#max of an empty multiset and #sum over a
non-integer element evaluate to the undefined marker, which satisfies no
comparison.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .errors import SymbolArithmeticError
from .syntax import (
    AGGREGATE,
    BUILTIN,
    INT,
    NEGATIVE,
    POSITIVE,
    AggregateAtom,
    BuiltinAtom,
    GroundSet,
    Literal,
    Program,
    GroundProgram,
    Rule,
    StandardAtom,
    Term,
    const_key,
    num,
)

UNDEFINED = None  # the out-of-domain marker


def eval_sum_expr(terms: tuple[Term, ...]) -> Term:
    """Evaluate one side of a builtin atom. A lone symbol is itself a value."""
    if len(terms) == 1:
        return terms[0]
    total = 0
    for t in terms:
        if t.kind != INT:
            raise SymbolArithmeticError(
                "arithmetic applied to symbol constant %r" % str(t)
            )
        total += t.value
    return num(total)


def compare(left: Term, op: str, right: Term) -> bool:
    lk, rk = const_key(left), const_key(right)
    if op == "=":
        return lk == rk
    if op == "!=":
        return lk != rk
    if op == "<":
        return lk < rk
    if op == "<=":
        return lk <= rk
    if op == ">":
        return lk > rk
    if op == ">=":
        return lk >= rk
    raise ValueError("unknown comparator %r" % op)


def eval_builtin(atom: BuiltinAtom) -> bool:
    return compare(eval_sum_expr(atom.lhs), atom.cmp, eval_sum_expr(atom.rhs))


def eval_set(set_term: GroundSet, interp: Iterable[StandardAtom]) -> list[Term]:
    """The multiset of first constants of pairs whose conjunction holds."""
    if not isinstance(interp, (set, frozenset)):
        interp = set(interp)
    bag = [
        terms[0]
        for terms, conj in set_term.pairs
        if all(atom in interp for atom in conj)
    ]
    bag.sort(key=const_key)
    return bag


def eval_aggregate(func: str, bag: list[Term]) -> Optional[Term]:
    """Apply an aggregate function to a multiset of constants.

    Returns the undefined marker when the multiset is outside the function's
    domain: #sum over a non-integer, or #min/#max of an empty multiset.
    """
    if func == "#count":
        return num(len(bag))
    if func == "#sum":
        if any(t.kind != INT for t in bag):
            return UNDEFINED
        return num(sum(t.value for t in bag))
    if func == "#min":
        if not bag:
            return UNDEFINED
        return min(bag, key=const_key)
    if func == "#max":
        if not bag:
            return UNDEFINED
        return max(bag, key=const_key)
    raise ValueError("unknown aggregate function %r" % func)


def aggregate_satisfied(atom: AggregateAtom, interp) -> bool:
    assert isinstance(atom.set_term, GroundSet), "aggregate is not ground"
    value = eval_aggregate(atom.func, eval_set(atom.set_term, interp))
    if value is UNDEFINED:
        return False
    return compare(value, atom.cmp, atom.guard)


def literal_satisfied(lit: Literal, interp) -> bool:
    """Truth of a ground literal with respect to an interpretation."""
    if lit.kind == POSITIVE:
        return lit.atom in interp
    if lit.kind == NEGATIVE:
        return lit.atom not in interp
    if lit.kind == AGGREGATE:
        return aggregate_satisfied(lit.atom, interp)
    if lit.kind == BUILTIN:
        return eval_builtin(lit.atom)
    raise ValueError("unknown literal kind %r" % lit.kind)


def body_satisfied(rule: Rule, interp) -> bool:
    return all(literal_satisfied(lit, interp) for lit in rule.body)


def rule_satisfied(rule: Rule, interp) -> bool:
    if not body_satisfied(rule, interp):
        return True
    if not rule.heads:
        return False
    return any(h in interp for h in rule.heads)


def is_model(interp, program: Program) -> bool:
    """True when every rule with a true body has a true head atom."""
    interp = frozenset(interp)
    return all(rule_satisfied(rule, interp) for rule in program.rules)


def reduct(program: Program, interp) -> GroundProgram:
    """The FLP reduct: the rules whose whole body is true in the interpretation."""
    interp = frozenset(interp)
    return GroundProgram(
        tuple(rule for rule in program.rules if body_satisfied(rule, interp))
    )
