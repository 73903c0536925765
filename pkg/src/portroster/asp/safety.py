"""Safety check for rules.

A variable is local when it appears solely inside set terms of its rule and
global otherwise.  A rule is safe when (i) every global variable occurs in a
positive standard body literal and (ii) every local variable occurring in a
set term also occurs in that set term's conjunction.  A program is safe when
all of its rules are.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    AGGREGATE,
    BUILTIN,
    NEGATIVE,
    POSITIVE,
    AggregateAtom,
    Program,
    Rule,
    StandardAtom,
    SymbolicSet,
)

GLOBAL_UNBOUND = "global-unbound"  # condition (i) failed
LOCAL_UNBOUND = "local-unbound"  # condition (ii) failed


@dataclass(frozen=True)
class SafetyViolation:
    rule_index: int
    variable: str
    condition: str  # GLOBAL_UNBOUND or LOCAL_UNBOUND
    rule: Rule

    def __str__(self) -> str:
        if self.condition == GLOBAL_UNBOUND:
            why = "global variable %r not bound by a positive body literal"
        else:
            why = "local variable %r missing from its set term's conjunction"
        return ("rule %d: " % (self.rule_index + 1)) + (why % self.variable)


def _outside_set_term_variables(rule: Rule) -> set[str]:
    out: set[str] = set()
    for atom in rule.heads:
        out |= atom.variables()
    for lit in rule.body:
        payload = lit.atom
        if lit.kind in (POSITIVE, NEGATIVE):
            out |= payload.variables()
        elif lit.kind == BUILTIN:
            out |= payload.variables()
        elif lit.kind == AGGREGATE:
            if payload.guard.kind == "var":
                out.add(payload.guard.value)
    return out


def _set_term_variables(rule: Rule) -> set[str]:
    out: set[str] = set()
    for st in rule.set_terms():
        out |= st.variables()
    return out


def rule_local_variables(rule: Rule) -> set[str]:
    return _set_term_variables(rule) - _outside_set_term_variables(rule)


def rule_global_variables(rule: Rule) -> set[str]:
    return (_set_term_variables(rule) | _outside_set_term_variables(rule)) - (
        rule_local_variables(rule)
    )


def check_rule(rule: Rule, rule_index: int = 0) -> list[SafetyViolation]:
    violations = []
    local = rule_local_variables(rule)
    global_vars = rule_global_variables(rule)

    positive_vars: set[str] = set()
    for lit in rule.body:
        if lit.kind == POSITIVE:
            positive_vars |= lit.atom.variables()

    for name in sorted(global_vars - positive_vars):
        violations.append(SafetyViolation(rule_index, name, GLOBAL_UNBOUND, rule))

    for st in rule.set_terms():
        conj_vars: set[str] = set()
        for atom in st.conj:
            conj_vars |= atom.variables()
        in_terms = {t.value for t in st.terms if t.kind == "var"}
        for name in sorted((in_terms & local) - conj_vars):
            violations.append(SafetyViolation(rule_index, name, LOCAL_UNBOUND, rule))

    return violations


def check_safety(program: Program) -> list[SafetyViolation]:
    """Return every safety violation; an empty list means the program is safe."""
    violations = []
    for idx, rule in enumerate(program.rules):
        violations.extend(check_rule(rule, idx))
    return violations


def is_safe(program: Program) -> bool:
    return not check_safety(program)
