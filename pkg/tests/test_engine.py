"""Team building, checking, and explaining on small roster instances."""

import pytest

from portroster.asp.solve import GroundingLimits, SolveLimits
from portroster.engine import (
    AUTO,
    DEGRADED,
    FEASIBLE,
    INFEASIBLE,
    KIND_FAIRNESS,
    KIND_TURNOVER,
    PRIORITIZED,
    RESOURCE_LIMIT,
    STRICT,
    Assignment,
    InvalidInstanceError,
    Violation,
    assignment_from_document,
    assignment_to_document,
    check_team,
    explain_team,
    outcome_to_document,
    report_to_document,
    solve,
)
from portroster.model import (
    EmployeeRecord,
    HistoryRecord,
    ShiftSpec,
    SkillSpec,
    make_instance,
)
from portroster.synth import (
    conflict_instance,
    double_shift_instance,
    two_role_instance,
)


def test_two_role_instance_solves_strict():
    outcome = solve(two_role_instance())
    assert outcome.status == FEASIBLE
    assert outcome.mode_used == STRICT
    assert set(outcome.assignment.triples) == {
        ("e1", "sh", "s1"),
        ("e2", "sh", "s2"),
    }


def test_solved_team_passes_check_and_explain():
    instance = two_role_instance()
    outcome = solve(instance)
    assert check_team(instance, outcome.assignment) is True
    report = explain_team(instance, outcome.assignment)
    assert report.consistent is True
    assert report.violations == ()


def test_conflict_instance_is_strict_infeasible():
    outcome = solve(conflict_instance(), mode=STRICT)
    assert outcome.status == INFEASIBLE
    assert outcome.assignment is None


def test_conflict_instance_cascades_to_degraded():
    outcome = solve(conflict_instance(), mode=AUTO)
    assert outcome.status == DEGRADED
    assert outcome.mode_used == PRIORITIZED
    assert set(outcome.assignment.triples) == {
        ("e1", "sh1", "s1"),
        ("e2", "sh1", "s2"),
    }
    assert [v.kind for v in outcome.waived_preferences] == [KIND_FAIRNESS]
    assert any("strict" in note for note in outcome.diagnostics)


def test_degraded_team_passes_relaxed_check_only():
    instance = conflict_instance()
    outcome = solve(instance, mode=AUTO)
    assert check_team(instance, outcome.assignment, relaxed=True) is True
    assert check_team(instance, outcome.assignment, relaxed=False) is False


def test_turnover_keeps_oldest_allocation_first():
    # e1's last heavy allocation is older, so e1 must take the heavy skill
    outcome = solve(conflict_instance(), mode=PRIORITIZED)
    assert ("e1", "sh1", "s1") in outcome.assignment.triples


def test_infeasible_when_requirements_exceed_staff():
    instance = make_instance(
        employees=[EmployeeRecord("e1", frozenset({"s1"}))],
        skills=[SkillSpec("s1")],
        shifts=[ShiftSpec("sh", 8)],
        requirements=[("sh", "s1", 2)],
    )
    outcome = solve(instance)
    assert outcome.status == INFEASIBLE
    assert outcome.assignment is None


def test_invalid_instance_raises_with_issues():
    instance = make_instance(
        employees=[EmployeeRecord("e1", frozenset({"ghost"}))],
        skills=[SkillSpec("s1")],
        shifts=[ShiftSpec("sh", 8)],
        requirements=[("sh", "s1", 1)],
    )
    with pytest.raises(InvalidInstanceError) as exc:
        solve(instance)
    assert any(i.code == "unknown-skill" for i in exc.value.issues)


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        solve(two_role_instance(), mode="optimal")


def test_tiny_budget_reports_resource_limit():
    limits = SolveLimits(max_steps=1)
    outcome = solve(conflict_instance(), limits=limits)
    assert outcome.status == RESOURCE_LIMIT
    assert outcome.assignment is None
    assert any("budget" in note for note in outcome.diagnostics)


def test_tiny_grounding_budget_reports_resource_limit():
    limits = SolveLimits(grounding=GroundingLimits(max_rules=3))
    outcome = solve(two_role_instance(), limits=limits)
    assert outcome.status == RESOURCE_LIMIT


def test_alternatives_enumerate_distinct_teams():
    instance = make_instance(
        employees=[
            EmployeeRecord("e1", frozenset({"s1"})),
            EmployeeRecord("e2", frozenset({"s1"})),
        ],
        skills=[SkillSpec("s1")],
        shifts=[ShiftSpec("sh", 8)],
        requirements=[("sh", "s1", 1)],
    )
    outcome = solve(instance, alternatives=4)
    assert outcome.status == FEASIBLE
    assert len(set(outcome.alternatives)) == 2  # e1 or e2 takes the slot
    assert outcome.assignment == outcome.alternatives[0]


def test_pre_assignment_pins_the_employee():
    instance = make_instance(
        employees=[
            EmployeeRecord("e1", frozenset({"s1"})),
            EmployeeRecord("e2", frozenset({"s1"})),
        ],
        skills=[SkillSpec("s1")],
        shifts=[ShiftSpec("sh", 8)],
        requirements=[("sh", "s1", 1)],
        pre_assignments=[("e2", "sh", "s1")],
    )
    outcome = solve(instance, alternatives=4)
    assert outcome.status == FEASIBLE
    assert all(("e2", "sh", "s1") in a.triples for a in outcome.alternatives)


def test_exclusion_removes_the_employee():
    instance = make_instance(
        employees=[
            EmployeeRecord("e1", frozenset({"s1"})),
            EmployeeRecord("e2", frozenset({"s1"})),
        ],
        skills=[SkillSpec("s1")],
        shifts=[ShiftSpec("sh", 8)],
        requirements=[("sh", "s1", 1)],
        exclusions=[("e1", "sh")],
    )
    outcome = solve(instance)
    assert outcome.assignment.triples == (("e2", "sh", "s1"),)


def test_double_shift_links_allow_spanning_both_halves():
    outcome = solve(double_shift_instance())
    assert outcome.status in (FEASIBLE, DEGRADED)
    small = outcome.assignment.employees_on_shift(
        double_shift_instance().shifts[0].id
    )
    big = outcome.assignment.employees_on_shift(double_shift_instance().shifts[1].id)
    assert small <= big  # everyone on the small half also works the big one


def test_explain_reports_turnover_swap():
    instance = conflict_instance()
    swapped = Assignment((("e2", "sh1", "s1"), ("e1", "sh1", "s2")))
    report = explain_team(instance, swapped)
    assert report.consistent is False
    turnover = [v for v in report.violations if v.kind == KIND_TURNOVER]
    assert [(v.employees, v.shift_id, v.skill_id) for v in turnover] == [
        (("e1", "e2"), "sh1", "s1")
    ]


def test_check_catches_multi_shift_double_booking():
    instance = make_instance(
        employees=[EmployeeRecord("e1", frozenset({"s1"}))],
        skills=[SkillSpec("s1")],
        shifts=[ShiftSpec("sh1", 4), ShiftSpec("sh2", 4)],
        requirements=[("sh1", "s1", 1), ("sh2", "s1", 1)],
    )
    team = Assignment((("e1", "sh1", "s1"), ("e1", "sh2", "s1")))
    report = explain_team(instance, team)
    kinds = {v.kind for v in report.violations}
    assert "multiShift" in kinds


def test_check_catches_missing_headcount():
    instance = two_role_instance()
    report = explain_team(instance, Assignment((("e1", "sh", "s1"),)))
    assert report.consistent is False
    count = [v for v in report.violations if v.kind == "count"]
    assert count and count[0].required_count == 1 and count[0].actual_count == 0


def test_violation_message_format():
    v = Violation("turnover", ("e1", "e2"), "sh", "s1")
    assert v.message() == "TURNOVER e1 e2 sh s1"


def test_outcome_document_shape():
    outcome = solve(conflict_instance(), mode=AUTO)
    doc = outcome_to_document(outcome)
    assert doc["status"] == DEGRADED
    assert doc["modeUsed"] == PRIORITIZED
    assert doc["assignment"]["triples"]
    assert doc["waivedPreferences"][0]["kind"] == KIND_FAIRNESS
    assert isinstance(doc["diagnostics"], list)


def test_assignment_document_round_trip():
    team = Assignment((("e1", "sh", "s1"), ("e2", "sh", "s2")))
    assert assignment_from_document(assignment_to_document(team)) == team


def test_report_document_shape():
    instance = conflict_instance()
    swapped = Assignment((("e2", "sh1", "s1"), ("e1", "sh1", "s2")))
    doc = report_to_document(explain_team(instance, swapped))
    assert doc["consistent"] is False
    assert all(
        set(v) >= {"kind", "employees", "shift", "skill", "message"}
        for v in doc["violations"]
    )
