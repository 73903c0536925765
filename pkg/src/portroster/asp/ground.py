"""Grounding: from rules with variables to variable-free rules.

Two routes are provided.  ``naive_ground`` follows the textbook definition:
every global substitution over the universe is enumerated, set terms are
replaced by their full instantiation, and builtin atoms are evaluated away.
``ground_program`` produces the same answer sets but only emits rule
instances whose positive body atoms are derivable (a bottom-up
over-approximation that ignores negation and aggregates), joining body
literals instead of enumerating the substitution cross product.  Rule
instances an answer set could never fire are sound to drop: their positive
body mentions an atom that no interpretation made of derivable atoms
contains, so they belong to no reduct.

If the program has no constants a fresh one ("xi") is injected so the
universe is never empty.  Duplicate ground rules and duplicate head atoms
are collapsed.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import GroundBudgetError, UnsafeProgramError
from .eval import eval_builtin
from .safety import check_safety, rule_global_variables
from .syntax import (
    AGGREGATE,
    BUILTIN,
    NEGATIVE,
    POSITIVE,
    AggregateAtom,
    BuiltinAtom,
    GroundProgram,
    GroundSet,
    Literal,
    Program,
    Rule,
    StandardAtom,
    SymbolicSet,
    Term,
    VAR,
    sym,
)

FRESH_CONSTANT = sym("xi")


@dataclass(frozen=True)
class GroundingLimits:
    max_rules: int = 1_000_000
    timeout: Optional[float] = None  # seconds of wall clock


DEFAULT_LIMITS = GroundingLimits()


class _Budget:
    def __init__(self, limits: GroundingLimits):
        self.limits = limits
        self.rules = 0
        self.deadline = (
            time.monotonic() + limits.timeout if limits.timeout is not None else None
        )

    def charge_rule(self, count: int = 1):
        self.rules += count
        if self.rules > self.limits.max_rules:
            raise GroundBudgetError(
                "ground rule budget exceeded (%d rules)" % self.limits.max_rules
            )

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise GroundBudgetError("grounding timeout exceeded")


# -- substitutions ---------------------------------------------------------


def subst_term(term: Term, sub: dict) -> Term:
    if term.kind == VAR:
        return sub.get(term.value, term)
    return term


def subst_atom(atom: StandardAtom, sub: dict) -> StandardAtom:
    if not atom.args:
        return atom
    return StandardAtom(atom.pred, tuple(subst_term(t, sub) for t in atom.args))


def subst_builtin(atom: BuiltinAtom, sub: dict) -> BuiltinAtom:
    return BuiltinAtom(
        tuple(subst_term(t, sub) for t in atom.lhs),
        atom.cmp,
        tuple(subst_term(t, sub) for t in atom.rhs),
    )


# -- derivable-atom store ----------------------------------------------------


class _Facts:
    """Ground atoms grouped by predicate, with a first-argument index."""

    def __init__(self):
        self.by_pred: dict[tuple[str, int], list[StandardAtom]] = {}
        self.by_first: dict[tuple[str, int, Term], list[StandardAtom]] = {}
        self.all: set[StandardAtom] = set()

    def add(self, atom: StandardAtom) -> bool:
        if atom in self.all:
            return False
        self.all.add(atom)
        key = (atom.pred, len(atom.args))
        self.by_pred.setdefault(key, []).append(atom)
        if atom.args:
            self.by_first.setdefault(key + (atom.args[0],), []).append(atom)
        return True

    def __contains__(self, atom: StandardAtom) -> bool:
        return atom in self.all

    def candidates(self, atom: StandardAtom, sub: dict) -> list[StandardAtom]:
        key = (atom.pred, len(atom.args))
        if atom.args:
            first = subst_term(atom.args[0], sub)
            if first.kind != VAR:
                return self.by_first.get(key + (first,), [])
        return self.by_pred.get(key, [])


def _match(atom: StandardAtom, fact: StandardAtom, sub: dict) -> Optional[dict]:
    """Extend sub so that atom matches fact, or give up."""
    out = None
    for pattern, value in zip(atom.args, fact.args):
        if pattern.kind == VAR:
            bound = sub.get(pattern.value) if out is None else out.get(pattern.value)
            if bound is None:
                if out is None:
                    out = dict(sub)
                out[pattern.value] = value
            elif bound != value:
                return None
        elif pattern != value:
            return None
    return out if out is not None else dict(sub)


def _join(
    atoms: list[StandardAtom],
    builtins: list[BuiltinAtom],
    facts: _Facts,
    sub: dict,
) -> Iterator[dict]:
    """Substitutions making every atom a known fact and every builtin true.

    Builtins are evaluated as soon as their variables are bound, pruning the
    join early; the most-bound atom is grounded first to keep it narrow.
    """
    pending = []
    for b in builtins:
        if all(v in sub for v in b.variables()):
            if not eval_builtin(subst_builtin(b, sub)):
                return
        else:
            pending.append(b)
    if not atoms:
        if not pending:
            yield sub
        return

    def bound_score(atom: StandardAtom) -> int:
        return sum(1 for t in atom.args if t.kind != VAR or t.value in sub) - len(
            atom.args
        )

    best = max(range(len(atoms)), key=lambda i: (bound_score(atoms[i]), -i))
    first = atoms[best]
    rest = atoms[:best] + atoms[best + 1 :]
    for fact in facts.candidates(first, sub):
        extended = _match(first, fact, sub)
        if extended is not None:
            yield from _join(rest, pending, facts, extended)


# -- set-term instantiation ---------------------------------------------------


def instantiate_set(
    set_term: SymbolicSet,
    sub: dict,
    universe,
    derivable: Optional[_Facts] = None,
) -> GroundSet:
    """inst(S): one pair per local substitution of the set term.

    The global substitution is applied first; the variables still free are by
    definition the local ones.  When ``derivable`` is given, pairs whose
    conjunction mentions an underivable atom are dropped (they never
    contribute to the multiset of an interpretation made of derivable atoms)
    and the local substitutions are found by joining the conjunction against
    the derivable atoms instead of enumerating the universe.
    """
    terms = tuple(subst_term(t, sub) for t in set_term.terms)
    conj = tuple(subst_atom(a, sub) for a in set_term.conj)
    local_vars = sorted(
        {t.value for t in terms if t.kind == VAR}
        | {v for a in conj for v in a.variables()}
    )
    if not local_vars:
        if derivable is not None and any(a not in derivable for a in conj):
            return GroundSet.make([])
        return GroundSet.make([(terms, conj)])

    pairs = []
    if derivable is None:
        for combo in itertools.product(universe, repeat=len(local_vars)):
            local = dict(zip(local_vars, combo))
            pairs.append(
                (
                    tuple(subst_term(t, local) for t in terms),
                    tuple(subst_atom(a, local) for a in conj),
                )
            )
    else:
        for local in _join(list(conj), [], derivable, {}):
            gterms = tuple(subst_term(t, local) for t in terms)
            pairs.append((gterms, tuple(subst_atom(a, local) for a in conj)))
    return GroundSet.make(pairs)


# -- constraint rewriting ---------------------------------------------------


def rewrite_constraints(program: Program) -> Program:
    """Replace each constraint ":- B" by "co_i :- B, not co_i" (fresh co_i)."""
    used = {pred for pred, _ in program.predicates()}
    rules = []
    counter = 0
    for rule in program.rules:
        if rule.heads:
            rules.append(rule)
            continue
        counter += 1
        name = "co_%d" % counter
        while name in used:
            counter += 1
            name = "co_%d" % counter
        used.add(name)
        marker = StandardAtom(name)
        rules.append(Rule((marker,), rule.body + (Literal(NEGATIVE, marker),)))
    return Program(tuple(rules))


# -- shared helpers ----------------------------------------------------------


def _universe(program: Program) -> tuple[Term, ...]:
    universe = program.universe()
    if not universe:
        universe = (FRESH_CONSTANT,)
    return universe


def _split_body(rule: Rule):
    positive, builtins = [], []
    for lit in rule.body:
        if lit.kind == POSITIVE:
            positive.append(lit.atom)
        elif lit.kind == BUILTIN:
            builtins.append(lit.atom)
    return positive, builtins


def _finish_rule(
    rule: Rule,
    sub: dict,
    universe,
    derivable: Optional[_Facts],
    dedupe: set,
    out: list,
    budget: _Budget,
) -> None:
    """Apply sub, evaluate builtins, instantiate set terms, emit the rule."""
    body: list[Literal] = []
    for lit in rule.body:
        if lit.kind == BUILTIN:
            if not eval_builtin(subst_builtin(lit.atom, sub)):
                return  # a false builtin deletes the instance
            continue  # a true builtin is dropped
        if lit.kind == AGGREGATE:
            agg = lit.atom
            body.append(
                Literal(
                    AGGREGATE,
                    AggregateAtom(
                        agg.func,
                        instantiate_set(agg.set_term, sub, universe, derivable),
                        agg.cmp,
                        subst_term(agg.guard, sub),
                    ),
                )
            )
        else:
            body.append(Literal(lit.kind, subst_atom(lit.atom, sub)))
    heads = []
    seen_heads = set()
    for atom in rule.heads:
        ground = subst_atom(atom, sub)
        if ground not in seen_heads:
            seen_heads.add(ground)
            heads.append(ground)
    ground_rule = Rule(tuple(heads), tuple(body))
    if ground_rule in dedupe:
        return
    dedupe.add(ground_rule)
    budget.charge_rule()
    out.append(ground_rule)


# -- naive grounding ---------------------------------------------------------


def naive_ground(
    program: Program, limits: GroundingLimits = DEFAULT_LIMITS
) -> GroundProgram:
    """Ground(P) exactly as defined: all global substitutions over U_P."""
    violations = check_safety(program)
    if violations:
        raise UnsafeProgramError(violations)
    program = rewrite_constraints(program)
    universe = _universe(program)
    budget = _Budget(limits)
    out: list[Rule] = []
    dedupe: set[Rule] = set()
    for rule in program.rules:
        budget.check_time()
        global_vars = sorted(rule_global_variables(rule))
        for combo in itertools.product(universe, repeat=len(global_vars)):
            sub = dict(zip(global_vars, combo))
            _finish_rule(rule, sub, universe, None, dedupe, out, budget)
            budget.check_time()
    return GroundProgram(tuple(out))


# -- optimized grounding ------------------------------------------------------


def _derivable_atoms(program: Program, budget: _Budget) -> _Facts:
    """Least fixpoint of head atoms, reading negation and aggregates as true."""
    facts = _Facts()
    prepared = [(rule,) + _split_body(rule) for rule in program.rules]
    changed = True
    while changed:
        changed = False
        budget.check_time()
        for rule, positive, builtins in prepared:
            for sub in _join(positive, builtins, facts, {}):
                for atom in rule.heads:
                    if facts.add(subst_atom(atom, sub)):
                        changed = True
    return facts


def ground_program(
    program: Program,
    limits: GroundingLimits = DEFAULT_LIMITS,
    *,
    prune_set_pairs: bool = False,
) -> GroundProgram:
    """Ground the program, keeping only instances whose positive body is derivable.

    The result has the same answer sets as ``naive_ground``.  With
    ``prune_set_pairs`` the instantiated set terms also drop pairs whose
    conjunction is underivable; the full instantiation is the default so the
    ground text matches the definition pair for pair.
    """
    violations = check_safety(program)
    if violations:
        raise UnsafeProgramError(violations)
    program = rewrite_constraints(program)
    universe = _universe(program)
    budget = _Budget(limits)
    derivable = _derivable_atoms(program, budget)
    out: list[Rule] = []
    dedupe: set[Rule] = set()
    for rule in program.rules:
        budget.check_time()
        positive, builtins = _split_body(rule)
        for sub in _join(positive, builtins, derivable, {}):
            _finish_rule(
                rule,
                sub,
                universe,
                derivable if prune_set_pairs else None,
                dedupe,
                out,
                budget,
            )
            budget.check_time()
    return GroundProgram(tuple(out))
