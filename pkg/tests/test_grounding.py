"""Grounding tests: full instantiation, builtin evaluation, budgets, pruning."""

import pytest

from portroster.asp import (
    GroundBudgetError,
    GroundingLimits,
    ground_program,
    naive_ground,
    parse_program,
)
from portroster.asp.ground import FRESH_CONSTANT, rewrite_constraints
from portroster.asp.syntax import StandardAtom, num, sym

EXAMPLE_PROGRAM = """
a(1) v b(2,2).
a(2) v b(2,1).
c(X) :- a(X), #sum{Y: b(X,Y)} >= 2.
"""

EXAMPLE_GROUND = """
a(1) v b(2,2).
a(2) v b(2,1).
c(1) :- a(1), #sum{⟨1: b(1,1)⟩, ⟨2: b(1,2)⟩} >= 2.
c(2) :- a(2), #sum{⟨1: b(2,1)⟩, ⟨2: b(2,2)⟩} >= 2.
"""


def rules_of(text, grounder=naive_ground):
    return set(grounder(parse_program(text)).rules)


def test_instantiation_of_the_two_guess_rules_plus_aggregate():
    expected = set(parse_program(EXAMPLE_GROUND).rules)
    assert rules_of(EXAMPLE_PROGRAM) == expected


def test_optimized_grounding_matches_on_the_same_program():
    assert rules_of(EXAMPLE_PROGRAM, ground_program) == set(
        parse_program(EXAMPLE_GROUND).rules
    )


def test_ground_program_is_identity_on_ground_input():
    text = "a(1) v b(2,2).\nc(1) :- a(1), not b(2,2)."
    assert rules_of(text) == set(parse_program(text).rules)


def test_substitutions_enumerate_the_universe():
    got = rules_of("d(1). d(2). p(X) :- d(X).")
    expected = set(parse_program("d(1). d(2). p(1) :- d(1). p(2) :- d(2).").rules)
    assert got == expected


def test_naive_grounding_covers_underivable_instances_too():
    # With no d facts the universe still has the head constant, so the naive
    # grounder emits the (unsatisfiable) instance while the optimized one
    # drops it; both have the same answer sets.
    program = parse_program("q(1). p(X) :- d(X).")
    naive = naive_ground(program)
    optimized = ground_program(program)
    assert "p(1) :- d(1)." in {str(r) for r in naive.rules}
    assert {str(r) for r in optimized.rules} == {"q(1)."}


def test_fresh_constant_for_constant_free_programs():
    program = parse_program("p(X) :- d(X).")
    ground = naive_ground(program)
    assert ground.rules == tuple(
        parse_program("p(%s) :- d(%s)." % (FRESH_CONSTANT, FRESH_CONSTANT)).rules
    )


@pytest.mark.parametrize(
    "text,survivors",
    [
        ("d(1). d(5). p(X) :- d(X), X < 3.", {"d(1).", "d(5).", "p(1) :- d(1)."}),
        ("d(1). p(X) :- d(X), X + 1 = 2.", {"d(1).", "p(1) :- d(1)."}),
        ("d(1). p(X) :- d(X), X > 1.", {"d(1)."}),
    ],
)
def test_builtins_evaluated_at_grounding(text, survivors):
    assert {str(r) for r in naive_ground(parse_program(text)).rules} == survivors


def test_duplicate_ground_rules_collapse():
    got = rules_of("d(1). d(1). p :- d(1).")
    assert {str(r) for r in got} == {"d(1).", "p :- d(1)."}


def test_duplicate_head_atoms_collapse():
    got = rules_of("d(1). a(X) v a(1) :- d(X).")
    assert "a(1) :- d(1)." in {str(r) for r in got}


def test_anonymous_variables_range_over_the_universe():
    got = {str(r) for r in rules_of("e(1,2). p(X) :- e(X,_).")}
    assert "p(1) :- e(1,2)." in got


def test_constraint_rewriting_introduces_fresh_marker():
    program = parse_program("b. :- b.")
    rewritten = rewrite_constraints(program)
    constraint = rewritten.rules[1]
    assert len(constraint.heads) == 1
    marker = constraint.heads[0]
    assert marker.args == ()
    assert constraint.body[-1].atom == marker
    # the marker predicate must not collide with user predicates
    assert marker.pred not in {"b"}


def test_constraint_markers_avoid_user_predicates():
    program = parse_program("co. co2 :- co. :- co.")
    rewritten = rewrite_constraints(program)
    head_preds = {r.heads[0].pred for r in rewritten.rules}
    assert len(head_preds) == 3  # co, co2, and a fresh marker


def test_grounding_budget_is_enforced():
    text = "d(1). d(2). d(3). d(4). p(X,Y,Z) :- d(X), d(Y), d(Z)."
    with pytest.raises(GroundBudgetError):
        naive_ground(parse_program(text), GroundingLimits(max_rules=10))


def test_set_pair_pruning_keeps_only_derivable_conjuncts():
    program = parse_program(
        "b(2,1). c :- #count{Y: b(2,Y)} >= 1."
    )
    full = ground_program(program)
    pruned = ground_program(program, prune_set_pairs=True)
    full_pairs = full.rules[1].body[0].atom.set_term.pairs
    pruned_pairs = pruned.rules[1].body[0].atom.set_term.pairs
    assert len(full_pairs) == 2  # universe has constants 1 and 2
    assert len(pruned_pairs) == 1
    assert pruned_pairs[0][1][0] == StandardAtom("b", (num(2), num(1)))


def test_exceed_time_limit_style_join():
    text = """
    shift(sh1, 6).
    weekHours(48).
    workedWeeklyHours(e1, 44).
    workedWeeklyHours(e2, 40).
    exceedTimeLimit(Em,Sh) :- shift(Sh,D), workedWeeklyHours(Em,Wh), weekHours(Hmax), D + Wh > Hmax.
    """
    got = {str(r) for r in ground_program(parse_program(text)).rules}
    assert "exceedTimeLimit(e1,sh1) :- shift(sh1,6), workedWeeklyHours(e1,44), weekHours(48)." in got
    assert not any(s.startswith("exceedTimeLimit(e2") for s in got)
