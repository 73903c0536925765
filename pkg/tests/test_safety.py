"""Safety condition tests.

A rule is safe when (i) every global variable occurs in a positive standard
body literal and (ii) every local variable of a set term occurs in that set
term's conjunction.
"""

import pytest

from portroster.asp import UnsafeProgramError, check_safety, is_safe, naive_ground, parse_program
from portroster.asp.safety import GLOBAL_UNBOUND, LOCAL_UNBOUND, check_rule
from portroster.asp.parser import parse_rule

SAFE_MAX_RULE = "c(X) :- q(X,Y,V), #max{Z: a(Z), b(Z,V)} > Y."
UNSAFE_LOCAL_RULE = "c(X) :- q(X,Y,V), #sum{Z: a(X), b(X,S)} > Y."
UNSAFE_GLOBAL_RULE = "c(X) :- q(X,Y,V), #min{Z: a(Z), b(Z,V)} > T."


def test_safe_aggregate_rule_passes():
    assert check_rule(parse_rule(SAFE_MAX_RULE)) == []


def test_local_variable_missing_from_conjunction():
    violations = check_rule(parse_rule(UNSAFE_LOCAL_RULE))
    assert [(v.variable, v.condition) for v in violations] == [("Z", LOCAL_UNBOUND)]


def test_global_variable_not_positively_bound():
    violations = check_rule(parse_rule(UNSAFE_GLOBAL_RULE))
    assert [(v.variable, v.condition) for v in violations] == [("T", GLOBAL_UNBOUND)]


def test_ground_fact_is_safe():
    assert check_rule(parse_rule("a(1).")) == []


def test_program_level_check_reports_rule_indexes():
    program = parse_program(SAFE_MAX_RULE + "\n" + UNSAFE_GLOBAL_RULE)
    violations = check_safety(program)
    assert len(violations) == 1
    assert violations[0].rule_index == 1
    assert "T" in str(violations[0])


@pytest.mark.parametrize(
    "text,expected_safe",
    [
        ("p(X) :- q(X).", True),
        ("p(X) :- not q(X).", False),  # negative literals do not bind
        ("p(X) :- q(X), not r(X).", True),
        ("p(1) :- q(X), X < 2.", True),
        ("p(X) :- X < 2.", False),  # builtins do not bind
        ("p(X) v q(X) :- r(X,Y).", True),
        ("p(X) v q(Y) :- r(X).", False),  # head-only variable is global
        (":- q(X), not r(X).", True),
        ("p :- #count{V: q(V)} > N.", False),  # guard variable unbound
        ("p :- w(N), #count{V: q(V)} > N.", True),
        ("p(S) :- d(S), #sum{V: q(V,S)} > 0.", True),  # global inside set term
        ("p :- d(S), #sum{V, W: q(V), r(W)} > 0.", True),  # both locals in conj
        ("p :- d(S), #sum{V, W: q(V)} > 0.", False),  # W not in conjunction
    ],
)
def test_safety_verdicts(text, expected_safe):
    assert is_safe(parse_program(text)) is expected_safe


def test_grounding_rejects_unsafe_program():
    program = parse_program(UNSAFE_GLOBAL_RULE)
    with pytest.raises(UnsafeProgramError) as info:
        naive_ground(program)
    assert "T" in str(info.value)


def test_violations_enumerate_every_bad_variable():
    violations = check_rule(parse_rule("p(X,Y) :- not q(X), not q(Y)."))
    assert {(v.variable, v.condition) for v in violations} == {
        ("X", GLOBAL_UNBOUND),
        ("Y", GLOBAL_UNBOUND),
    }
