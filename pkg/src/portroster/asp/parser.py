"""Tokenizer and recursive-descent parser for the rule language.

Concrete syntax:

    rule       := head? (":-" body)? "."
    head       := atom ("v" atom)*
    body       := literal ("," literal)*
    literal    := "not" atom | aggregate | builtin | atom
    atom       := IDENT ("(" term ("," term)* ")")?
    aggregate  := FUNC "{" set "}" CMP term
    set        := term ("," term)* ":" atom ("," atom)*
                | pair ("," pair)* | <empty>
    pair       := "<" term ("," term)* ":" atom ("," atom)* ">"
    builtin    := sum CMP sum
    sum        := term ("+" term)*

Variables start with an uppercase letter, symbol constants with a lowercase
letter; integers are non-negative.  "_" is an anonymous variable, fresh per
occurrence.  "%" starts a comment.  "not" and the aggregate names are
reserved.  Unicode comparator glyphs and angle brackets are accepted on input;
the emitters in syntax.py always produce the ASCII spelling.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .syntax import (
    AGGREGATE_FUNCTIONS,
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
    AGGREGATE,
    BUILTIN,
    NEGATIVE,
    POSITIVE,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<func>\#(?:count|sum|min|max|[a-zA-Z]+))
  | (?P<int>\d+)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<variable>[A-Z][A-Za-z0-9_]*|_)
  | (?P<op>:-|!=|<=|>=|<>|≠|≤|≥|[=<>.,:(){}+]|⟨|⟩)
    """,
    re.VERBOSE,
)

_OP_ALIASES = {"≠": "!=", "≤": "<=", "≥": ">=", "<>": "!="}
_COMPARATORS = {"=", "!=", "<", "<=", ">", ">="}
_RESERVED = {"not"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "func", "int", "ident", "variable", "op", "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[_Token]:
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(
                "unexpected character %r" % text[pos], line, pos - line_start + 1
            )
        kind = match.lastgroup
        raw = match.group()
        if kind not in ("ws", "comment"):
            tok_text = _OP_ALIASES.get(raw, raw)
            tokens.append(_Token(kind, tok_text, line, match.start() - line_start + 1))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            line_start = match.start() + raw.rfind("\n") + 1
        pos = match.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.anon_counter = 0

    # -- token helpers ----------------------------------------------------

    def peek(self, ahead: int = 0) -> _Token:
        idx = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[idx]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            wanted = text if text is not None else kind
            raise ParseError(
                "expected %r but found %r" % (wanted, tok.text or "end of input"),
                tok.line,
                tok.column,
            )
        return self.advance()

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.column)

    # -- grammar ----------------------------------------------------------

    def parse_program(self) -> Program:
        rules = []
        while self.peek().kind != "eof":
            rules.append(self.parse_rule())
        return Program(tuple(rules))

    def parse_rule(self) -> Rule:
        heads: list[StandardAtom] = []
        body: list[Literal] = []
        if not (self.peek().kind == "op" and self.peek().text == ":-"):
            heads.append(self.parse_head_atom())
            while self.peek().kind == "ident" and self.peek().text == "v":
                self.advance()
                heads.append(self.parse_head_atom())
        if self.peek().kind == "op" and self.peek().text == ":-":
            self.advance()
            body.append(self.parse_literal())
            while self.peek().kind == "op" and self.peek().text == ",":
                self.advance()
                body.append(self.parse_literal())
        self.expect("op", ".")
        return Rule(tuple(heads), tuple(body))

    def parse_head_atom(self) -> StandardAtom:
        tok = self.peek()
        if tok.kind == "ident" and tok.text in _RESERVED:
            self.fail("reserved word %r cannot be used as a predicate" % tok.text)
        if tok.kind != "ident":
            self.fail("expected an atom in the rule head")
        return self.parse_atom()

    def parse_literal(self) -> Literal:
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "not":
            self.advance()
            after = self.peek()
            if after.kind == "func":
                self.fail("negation applies to standard atoms only")
            if after.kind != "ident" or after.text in _RESERVED:
                self.fail("expected an atom after 'not'")
            return Literal(NEGATIVE, self.parse_atom())
        if tok.kind == "func":
            return Literal(AGGREGATE, self.parse_aggregate())
        if tok.kind in ("variable", "int"):
            return Literal(BUILTIN, self.parse_builtin())
        if tok.kind == "ident":
            if tok.text in _RESERVED:
                self.fail("reserved word %r cannot start a literal" % tok.text)
            # A lowercase identifier opens either an atom or a comparison on
            # a symbol constant; look past the atom to find a comparator.
            save = self.pos
            atom = self.parse_atom()
            nxt = self.peek()
            if nxt.kind == "op" and (nxt.text in _COMPARATORS or nxt.text == "+"):
                if atom.args:
                    self.fail("comparison applied to a compound atom")
                self.pos = save
                return Literal(BUILTIN, self.parse_builtin())
            return Literal(POSITIVE, atom)
        self.fail("expected a body literal")

    def parse_atom(self) -> StandardAtom:
        name = self.expect("ident").text
        if name in _RESERVED:
            self.fail("reserved word %r cannot be used as a predicate" % name)
        args: list[Term] = []
        if self.peek().kind == "op" and self.peek().text == "(":
            self.advance()
            args.append(self.parse_term())
            while self.peek().kind == "op" and self.peek().text == ",":
                self.advance()
                args.append(self.parse_term())
            self.expect("op", ")")
        return StandardAtom(name, tuple(args))

    def parse_term(self) -> Term:
        tok = self.advance()
        if tok.kind == "variable":
            if tok.text == "_":
                self.anon_counter += 1
                return var("_ANON_%d" % self.anon_counter)
            return var(tok.text)
        if tok.kind == "int":
            return num(int(tok.text))
        if tok.kind == "ident":
            if tok.text in _RESERVED:
                raise ParseError(
                    "reserved word %r cannot be used as a constant" % tok.text,
                    tok.line,
                    tok.column,
                )
            return sym(tok.text)
        raise ParseError(
            "expected a term but found %r" % (tok.text or "end of input"),
            tok.line,
            tok.column,
        )

    def parse_aggregate(self) -> AggregateAtom:
        func_tok = self.expect("func")
        if func_tok.text not in AGGREGATE_FUNCTIONS:
            raise ParseError(
                "unknown aggregate function %r" % func_tok.text,
                func_tok.line,
                func_tok.column,
            )
        self.expect("op", "{")
        if self.peek().kind == "op" and self.peek().text in ("⟨", "<"):
            set_term: SymbolicSet | GroundSet = self.parse_ground_set()
        elif self.peek().kind == "op" and self.peek().text == "}":
            set_term = GroundSet.make([])
        else:
            set_term = self.parse_symbolic_set()
        self.expect("op", "}")
        cmp_tok = self.advance()
        if cmp_tok.kind != "op" or cmp_tok.text not in _COMPARATORS:
            raise ParseError(
                "expected a comparison operator after the aggregate set",
                cmp_tok.line,
                cmp_tok.column,
            )
        guard = self.parse_term()
        return AggregateAtom(func_tok.text, set_term, cmp_tok.text, guard)

    def parse_symbolic_set(self) -> SymbolicSet:
        terms = [self.parse_term()]
        while self.peek().kind == "op" and self.peek().text == ",":
            self.advance()
            terms.append(self.parse_term())
        self.expect("op", ":")
        conj = [self.parse_atom()]
        while self.peek().kind == "op" and self.peek().text == ",":
            self.advance()
            conj.append(self.parse_atom())
        return SymbolicSet(tuple(terms), tuple(conj))

    def parse_ground_set(self) -> GroundSet:
        pairs = []
        while True:
            opener = self.advance()
            if opener.kind != "op" or opener.text not in ("⟨", "<"):
                raise ParseError(
                    "expected a set pair", opener.line, opener.column
                )
            closer = "⟩" if opener.text == "⟨" else ">"
            terms = [self.parse_term()]
            while self.peek().kind == "op" and self.peek().text == ",":
                self.advance()
                terms.append(self.parse_term())
            self.expect("op", ":")
            conj = [self.parse_atom()]
            while self.peek().kind == "op" and self.peek().text == ",":
                self.advance()
                conj.append(self.parse_atom())
            self.expect("op", closer)
            for t in terms:
                if not t.is_ground():
                    self.fail("ground set pairs cannot contain variables")
            for a in conj:
                if not a.is_ground():
                    self.fail("ground set pairs cannot contain variables")
            pairs.append((tuple(terms), tuple(conj)))
            if self.peek().kind == "op" and self.peek().text == ",":
                self.advance()
                continue
            break
        return GroundSet.make(pairs)

    def parse_builtin(self) -> BuiltinAtom:
        lhs = self.parse_sum()
        cmp_tok = self.advance()
        if cmp_tok.kind != "op" or cmp_tok.text not in _COMPARATORS:
            raise ParseError(
                "expected a comparison operator",
                cmp_tok.line,
                cmp_tok.column,
            )
        rhs = self.parse_sum()
        return BuiltinAtom(lhs, cmp_tok.text, rhs)

    def parse_sum(self) -> tuple[Term, ...]:
        terms = [self.parse_term()]
        while self.peek().kind == "op" and self.peek().text == "+":
            self.advance()
            terms.append(self.parse_term())
        return tuple(terms)


def parse_program(text: str) -> Program:
    """Parse rule text into a Program, preserving the textual rule order."""
    return _Parser(text).parse_program()


def parse_rule(text: str) -> Rule:
    parser = _Parser(text)
    rule = parser.parse_rule()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError("trailing input after rule", tok.line, tok.column)
    return rule
