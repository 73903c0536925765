"""Abstract syntax for the rule language.

Classes:
    Term          -- variable, integer constant, or symbol constant
    StandardAtom  -- predicate applied to terms
    SymbolicSet   -- {Terms : Conj} set term of an aggregate before grounding
    GroundSet     -- instantiated set term, a set of <constants : conjunction> pairs
    AggregateAtom -- f(S) <op> guard
    BuiltinAtom   -- arithmetic comparison between sums of terms
    Literal       -- body element (positive, negative, aggregate, or builtin)
    Rule          -- disjunctive rule; an empty head marks a constraint
    Program       -- rule list in textual order
    GroundProgram -- program whose rules contain no variables

Interpretations are plain frozensets of ground StandardAtoms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

VAR = "var"
INT = "int"
SYM = "sym"

AGGREGATE_FUNCTIONS = ("#count", "#sum", "#min", "#max")
COMPARATORS = ("=", "!=", "<", "<=", ">", ">=")

# Negated comparator, used when rewriting is not needed but tests flip guards.
COMPLEMENT = {"=": "!=", "!=": "=", "<": ">=", "<=": ">", ">": "<=", ">=": "<"}


@dataclass(frozen=True, slots=True)
class Term:
    kind: str  # VAR, INT or SYM
    value: Union[str, int]

    def is_ground(self) -> bool:
        return self.kind != VAR

    def __str__(self) -> str:
        return str(self.value)


def var(name: str) -> Term:
    return Term(VAR, name)


def num(value: int) -> Term:
    return Term(INT, value)


def sym(name: str) -> Term:
    return Term(SYM, name)


def const_key(term: Term):
    """Total order on constants: integers first (numerically), then symbols."""
    if term.kind == INT:
        return (0, term.value, "")
    return (1, 0, term.value)


@dataclass(frozen=True, slots=True)
class StandardAtom:
    pred: str
    args: tuple[Term, ...] = ()

    def is_ground(self) -> bool:
        return all(t.is_ground() for t in self.args)

    def variables(self) -> set[str]:
        return {t.value for t in self.args if t.kind == VAR}

    def key(self):
        return (self.pred, len(self.args), tuple(const_key(t) for t in self.args))

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return "%s(%s)" % (self.pred, ",".join(str(t) for t in self.args))


@dataclass(frozen=True, slots=True)
class SymbolicSet:
    terms: tuple[Term, ...]
    conj: tuple[StandardAtom, ...]

    def variables(self) -> set[str]:
        out = {t.value for t in self.terms if t.kind == VAR}
        for atom in self.conj:
            out |= atom.variables()
        return out

    def __str__(self) -> str:
        return "{%s: %s}" % (
            ",".join(str(t) for t in self.terms),
            ", ".join(str(a) for a in self.conj),
        )


@dataclass(frozen=True, slots=True)
class GroundSet:
    # Pairs are kept sorted so structural equality means set equality.
    pairs: tuple[tuple[tuple[Term, ...], tuple[StandardAtom, ...]], ...]

    @staticmethod
    def make(pairs) -> "GroundSet":
        canon = set()
        for terms, conj in pairs:
            canon.add((tuple(terms), tuple(sorted(set(conj), key=StandardAtom.key))))
        return GroundSet(
            tuple(
                sorted(
                    canon,
                    key=lambda p: (
                        tuple(const_key(t) for t in p[0]),
                        tuple(a.key() for a in p[1]),
                    ),
                )
            )
        )

    def __str__(self) -> str:
        rendered = (
            "⟨%s: %s⟩"
            % (",".join(str(t) for t in terms), ", ".join(str(a) for a in conj))
            for terms, conj in self.pairs
        )
        return "{%s}" % ", ".join(rendered)


@dataclass(frozen=True, slots=True)
class AggregateAtom:
    func: str  # one of AGGREGATE_FUNCTIONS
    set_term: Union[SymbolicSet, GroundSet]
    cmp: str  # one of COMPARATORS
    guard: Term

    def is_ground(self) -> bool:
        return isinstance(self.set_term, GroundSet) and self.guard.is_ground()

    def __str__(self) -> str:
        return "%s%s %s %s" % (self.func, self.set_term, self.cmp, self.guard)


@dataclass(frozen=True, slots=True)
class BuiltinAtom:
    lhs: tuple[Term, ...]  # summands
    cmp: str
    rhs: tuple[Term, ...]

    def is_ground(self) -> bool:
        return all(t.is_ground() for t in self.lhs + self.rhs)

    def variables(self) -> set[str]:
        return {t.value for t in self.lhs + self.rhs if t.kind == VAR}

    def __str__(self) -> str:
        return "%s %s %s" % (
            " + ".join(str(t) for t in self.lhs),
            self.cmp,
            " + ".join(str(t) for t in self.rhs),
        )


POSITIVE = "pos"
NEGATIVE = "neg"
AGGREGATE = "agg"
BUILTIN = "builtin"


@dataclass(frozen=True, slots=True)
class Literal:
    kind: str
    atom: Union[StandardAtom, AggregateAtom, BuiltinAtom]

    def is_ground(self) -> bool:
        return self.atom.is_ground()

    def __str__(self) -> str:
        if self.kind == NEGATIVE:
            return "not %s" % self.atom
        return str(self.atom)


def pos(atom: StandardAtom) -> Literal:
    return Literal(POSITIVE, atom)


def neg(atom: StandardAtom) -> Literal:
    return Literal(NEGATIVE, atom)


@dataclass(frozen=True, slots=True)
class Rule:
    heads: tuple[StandardAtom, ...]
    body: tuple[Literal, ...] = ()

    def is_constraint(self) -> bool:
        return not self.heads

    def is_fact(self) -> bool:
        return len(self.heads) == 1 and not self.body and self.heads[0].is_ground()

    def is_ground(self) -> bool:
        return all(a.is_ground() for a in self.heads) and all(
            lit.is_ground() for lit in self.body
        )

    def set_terms(self) -> list[SymbolicSet]:
        return [
            lit.atom.set_term
            for lit in self.body
            if lit.kind == AGGREGATE and isinstance(lit.atom.set_term, SymbolicSet)
        ]

    def __str__(self) -> str:
        head_txt = " v ".join(str(a) for a in self.heads)
        if not self.body:
            return head_txt + "."
        body_txt = ", ".join(str(lit) for lit in self.body)
        if not self.heads:
            return ":- %s." % body_txt
        return "%s :- %s." % (head_txt, body_txt)


def _rule_constants(rule: Rule) -> set[Term]:
    out: set[Term] = set()

    def from_terms(terms):
        for t in terms:
            if t.is_ground():
                out.add(t)

    for atom in rule.heads:
        from_terms(atom.args)
    for lit in rule.body:
        payload = lit.atom
        if isinstance(payload, StandardAtom):
            from_terms(payload.args)
        elif isinstance(payload, BuiltinAtom):
            from_terms(payload.lhs)
            from_terms(payload.rhs)
        else:
            from_terms((payload.guard,))
            st = payload.set_term
            if isinstance(st, SymbolicSet):
                from_terms(st.terms)
                for atom in st.conj:
                    from_terms(atom.args)
            else:
                for terms, conj in st.pairs:
                    from_terms(terms)
                    for atom in conj:
                        from_terms(atom.args)
    return out


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = field(default_factory=tuple)

    def constants(self) -> set[Term]:
        out: set[Term] = set()
        for rule in self.rules:
            out |= _rule_constants(rule)
        return out

    def universe(self) -> tuple[Term, ...]:
        """U_P: the constants of the program, in the fixed total order."""
        return tuple(sorted(self.constants(), key=const_key))

    def predicates(self) -> set[tuple[str, int]]:
        out: set[tuple[str, int]] = set()
        for rule in self.rules:
            for atom in rule.heads:
                out.add((atom.pred, len(atom.args)))
            for lit in rule.body:
                payload = lit.atom
                if isinstance(payload, StandardAtom):
                    out.add((payload.pred, len(payload.args)))
                elif isinstance(payload, AggregateAtom):
                    st = payload.set_term
                    if isinstance(st, SymbolicSet):
                        for atom in st.conj:
                            out.add((atom.pred, len(atom.args)))
                    else:
                        for _, conj in st.pairs:
                            for atom in conj:
                                out.add((atom.pred, len(atom.args)))
        return out

    def is_ground(self) -> bool:
        return all(rule.is_ground() for rule in self.rules)

    def __str__(self) -> str:
        return "\n".join(str(rule) for rule in self.rules)


class GroundProgram(Program):
    """A Program whose rules are all variable-free (builtins already evaluated)."""


Interpretation = frozenset


def base(program: Program) -> tuple[StandardAtom, ...]:
    """B_P: every atom constructible from program predicates over U_P."""
    import itertools

    universe = program.universe()
    if not universe:
        universe = (sym("xi"),)
    atoms = []
    for pred, arity in sorted(program.predicates()):
        for combo in itertools.product(universe, repeat=arity):
            atoms.append(StandardAtom(pred, combo))
    return tuple(sorted(set(atoms), key=StandardAtom.key))
