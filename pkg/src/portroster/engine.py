"""Team-building orchestration: solve, check, and explain.

`solve` grounds the instance facts against the strict encoding and asks for
one answer set; when none exists it retries with the prioritized encoding and
flags the result as degraded.  `check_team` re-runs the constraints over a
given team, and `explain_team` lists every violated constraint as structured
data.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from .asp import (
    GroundBudgetError,
    Program,
    Rule,
    SolveBudgetError,
    SolveLimits,
    StandardAtom,
    enumerate_answer_sets,
    sym,
)
from .encode import ASSIGN_PREDICATE, CHECK, EXPLAIN, PRIORITIZED, STRICT, build_encoding
from .model import (
    ERROR,
    RosterInstance,
    ValidationIssue,
    instance_to_facts,
    validate_instance,
)

log = logging.getLogger(__name__)

FEASIBLE = "feasible"
DEGRADED = "degraded"
INFEASIBLE = "infeasible"
RESOURCE_LIMIT = "resource-limit"

AUTO = "auto"
SOLVE_MODES = (AUTO, STRICT, PRIORITIZED)

KIND_COUNT = "count"
KIND_MULTI_ROLE = "multiRole"
KIND_MULTI_SHIFT = "multiShift"
KIND_TIME_LIMIT = "timeLimit"
KIND_ELIGIBILITY = "eligibility"
KIND_DOUBLE_SHIFT = "doubleShift"
KIND_TURNOVER = "turnover"
KIND_FAIRNESS = "fairness"
KIND_CRUCIAL = "crucial"

PREFERENCE_KINDS = (KIND_TURNOVER, KIND_FAIRNESS, KIND_CRUCIAL)

DEFAULT_LIMITS = SolveLimits()


class InvalidInstanceError(ValueError):
    """Raised when solve is handed an instance with validation errors."""

    def __init__(self, issues: list[ValidationIssue]):
        super().__init__("; ".join(str(i) for i in issues))
        self.issues = issues


@dataclass(frozen=True)
class Assignment:
    triples: tuple[tuple[str, str, str], ...]  # (employee, shift, skill)

    @staticmethod
    def make(triples) -> "Assignment":
        return Assignment(tuple(sorted(tuple(t) for t in triples)))

    def employees_on_shift(self, shift_id: str) -> frozenset[str]:
        return frozenset(em for em, sh, _ in self.triples if sh == shift_id)

    def count(self, shift_id: str, skill_id: str) -> int:
        return sum(1 for _, sh, sk in self.triples if sh == shift_id and sk == skill_id)


EMPTY_ASSIGNMENT = Assignment(())


@dataclass(frozen=True)
class Violation:
    kind: str
    employees: tuple[str, ...] = ()
    shift_id: Optional[str] = None
    skill_id: Optional[str] = None
    extra: tuple[str, ...] = ()
    required_count: Optional[int] = None
    actual_count: Optional[int] = None

    def sort_key(self):
        return (
            self.kind,
            self.employees,
            self.shift_id or "",
            self.skill_id or "",
            self.extra,
            self.required_count or 0,
        )

    def message(self) -> str:
        parts = [self.kind.upper()]
        parts.extend(self.employees)
        if self.shift_id:
            parts.append(self.shift_id)
        if self.skill_id:
            parts.append(self.skill_id)
        parts.extend(self.extra)
        if self.required_count is not None:
            parts.append("required=%d" % self.required_count)
        if self.actual_count is not None:
            parts.append("actual=%d" % self.actual_count)
        return " ".join(parts)


@dataclass(frozen=True)
class CheckReport:
    consistent: bool
    violations: tuple[Violation, ...] = ()


@dataclass(frozen=True)
class SolveOutcome:
    status: str
    assignment: Optional[Assignment]
    mode_used: Optional[str]
    alternatives: tuple[Assignment, ...] = ()
    waived_preferences: tuple[Violation, ...] = ()
    diagnostics: tuple[str, ...] = ()


def roster_branch_key(atom: StandardAtom) -> str:
    """Deterministic decision order: assignment atoms by shift, skill, employee."""
    if atom.pred in (ASSIGN_PREDICATE, "nAssign") and len(atom.args) == 3:
        em, sh, sk = (str(t.value) for t in atom.args)
        tie = "0" if atom.pred == ASSIGN_PREDICATE else "1"
        return "0|%s|%s|%s|%s" % (sh, sk, em, tie)
    return "1|%s" % atom.pred


def instance_branch_key(instance: RosterInstance):
    """Branching order that tries preference-favoured employees first.

    Within a (shift, skill) slot, candidates sort by last heavy-skill
    allocation date, then accumulated weekly hours, then crucial-skill count,
    then id — the same orders the preference constraints enforce — so the
    first branch of the search already respects them when possible.
    """
    hours = {e.id: e.history.weekly_hours for e in instance.employees}
    crucial = instance.crucial_skills()
    heavy = instance.heavy_skills()
    crucial_count = {e.id: len(e.skills & crucial) for e in instance.employees}
    last = {
        (e.id, sk): e.history.last_allocation_map().get(sk, 0)
        for e in instance.employees
        for sk in heavy
    }

    def key(atom: StandardAtom) -> str:
        if atom.pred in (ASSIGN_PREDICATE, "nAssign") and len(atom.args) == 3:
            em, sh, sk = (str(t.value) for t in atom.args)
            tie = "0" if atom.pred == ASSIGN_PREDICATE else "1"
            return "0|%s|%s|%08d|%06d|%04d|%s|%s" % (
                sh,
                sk,
                last.get((em, sk), 0),
                hours.get(em, 0),
                crucial_count.get(em, 0),
                em,
                tie,
            )
        return "1|%s" % atom.pred

    return key


def _combine(facts: Program, encoding: Program) -> Program:
    return Program(facts.rules + encoding.rules)


def _team_facts(team: Assignment) -> tuple[Rule, ...]:
    return tuple(
        Rule((StandardAtom(ASSIGN_PREDICATE, (sym(em), sym(sh), sym(sk))),), ())
        for em, sh, sk in sorted(set(team.triples))
    )


def _extract_assignment(answer_set) -> Assignment:
    triples = [
        tuple(str(t.value) for t in atom.args)
        for atom in answer_set
        if atom.pred == ASSIGN_PREDICATE and len(atom.args) == 3
    ]
    return Assignment.make(triples)


def _enumerate(program: Program, limit: int, limits: SolveLimits, branch_key=None):
    return enumerate_answer_sets(
        program, limit=limit, limits=limits, branch_key=branch_key or roster_branch_key
    )


def solve(
    instance: RosterInstance,
    *,
    mode: str = AUTO,
    alternatives: int = 1,
    limits: SolveLimits = DEFAULT_LIMITS,
) -> SolveOutcome:
    """Build a team; cascade strict -> prioritized unless a mode is forced."""
    if mode not in SOLVE_MODES:
        raise ValueError("unknown solve mode %r" % mode)
    errors = [i for i in validate_instance(instance) if i.severity == ERROR]
    if errors:
        raise InvalidInstanceError(errors)

    has_doubles = bool(instance.double_shift_links)
    facts = instance_to_facts(instance)
    limit = max(1, alternatives)
    diagnostics: list[str] = []

    branch_key = instance_branch_key(instance)
    plan = {AUTO: (STRICT, PRIORITIZED), STRICT: (STRICT,), PRIORITIZED: (PRIORITIZED,)}
    for attempt in plan[mode]:
        program = _combine(facts, build_encoding(attempt, has_doubles))
        try:
            answers = _enumerate(program, limit, limits, branch_key)
        except (SolveBudgetError, GroundBudgetError) as exc:
            diagnostics.append("budget exhausted in %s mode: %s" % (attempt, exc))
            return SolveOutcome(
                RESOURCE_LIMIT, None, attempt, diagnostics=tuple(diagnostics)
            )
        if answers:
            found = tuple(_extract_assignment(a) for a in answers)
            if attempt == STRICT:
                return SolveOutcome(
                    FEASIBLE, found[0], STRICT, alternatives=found,
                    diagnostics=tuple(diagnostics),
                )
            waived = tuple(
                v
                for v in explain_team(instance, found[0], limits=limits).violations
                if v.kind in PREFERENCE_KINDS
            )
            diagnostics.append(
                "strict constraints unsatisfiable; %d preference tuple(s) waived"
                % len(waived)
            )
            return SolveOutcome(
                DEGRADED, found[0], PRIORITIZED, alternatives=found,
                waived_preferences=waived, diagnostics=tuple(diagnostics),
            )
        diagnostics.append("no answer set in %s mode" % attempt)

    return SolveOutcome(INFEASIBLE, None, plan[mode][-1], diagnostics=tuple(diagnostics))


def check_team(
    instance: RosterInstance,
    team: Assignment,
    *,
    relaxed: bool = False,
    limits: SolveLimits = DEFAULT_LIMITS,
) -> bool:
    """True iff the team satisfies every constraint (relaxed: guarded variant)."""
    has_doubles = bool(instance.double_shift_links)
    facts = instance_to_facts(instance, include_pre_assignments=False)
    program = Program(
        facts.rules
        + _team_facts(team)
        + build_encoding(CHECK, has_doubles, relaxed=relaxed).rules
    )
    return bool(_enumerate(program, 1, limits))


def explain_team(
    instance: RosterInstance,
    team: Assignment,
    *,
    relaxed: bool = False,
    limits: SolveLimits = DEFAULT_LIMITS,
) -> CheckReport:
    """Every constraint violation of the team, as structured report entries."""
    has_doubles = bool(instance.double_shift_links)
    facts = instance_to_facts(instance, include_pre_assignments=False)
    program = Program(
        facts.rules
        + _team_facts(team)
        + build_encoding(EXPLAIN, has_doubles, relaxed=relaxed).rules
    )
    answers = _enumerate(program, 1, limits)
    if not answers:
        raise AssertionError("explain program must always have an answer set")
    violations = _collect_violations(answers[0], team)
    return CheckReport(consistent=not violations, violations=violations)


def _collect_violations(answer_set, team: Assignment) -> tuple[Violation, ...]:
    seen: set[Violation] = set()
    for atom in answer_set:
        args = tuple(str(t.value) for t in atom.args)
        v = _violation_from_atom(atom.pred, args, team)
        if v is not None:
            seen.add(v)
    return tuple(sorted(seen, key=Violation.sort_key))


def _violation_from_atom(pred: str, args, team: Assignment) -> Optional[Violation]:
    if pred == "violatedCount":
        sh, sk, need = args
        return Violation(
            KIND_COUNT,
            shift_id=sh,
            skill_id=sk,
            required_count=int(need),
            actual_count=team.count(sh, sk),
        )
    if pred == "violatedMultiRole":
        em, sh, sk1, sk2 = args
        lo, hi = sorted((sk1, sk2))
        return Violation(KIND_MULTI_ROLE, (em,), shift_id=sh, skill_id=lo, extra=(hi,))
    if pred == "violatedMultiShift":
        em, sh1, sh2 = args
        lo, hi = sorted((sh1, sh2))
        return Violation(KIND_MULTI_SHIFT, (em,), shift_id=lo, extra=(hi,))
    if pred == "violatedTimeLimit":
        em, sh = args
        return Violation(KIND_TIME_LIMIT, (em,), shift_id=sh)
    if pred == "violatedEligibility":
        em, sh, sk = args
        return Violation(KIND_ELIGIBILITY, (em,), shift_id=sh, skill_id=sk)
    if pred == "violatedDoubleShift":
        em, small, big = args
        return Violation(KIND_DOUBLE_SHIFT, (em,), shift_id=small, extra=(big,))
    if pred == "violatedDoubleTime":
        em, sh1, sh2, bound = args
        return Violation(KIND_DOUBLE_SHIFT, (em,), shift_id=sh1, extra=(sh2, bound))
    if pred == "violatedTurnover":
        e1, e2, sh, sk = args
        return Violation(KIND_TURNOVER, (e1, e2), shift_id=sh, skill_id=sk)
    if pred == "violatedFairness":
        e1, e2, sh, sk = args
        return Violation(KIND_FAIRNESS, (e1, e2), shift_id=sh, skill_id=sk)
    if pred == "violatedCrucial":
        e1, e2, sh, sk = args
        return Violation(KIND_CRUCIAL, (e1, e2), shift_id=sh, skill_id=sk)
    return None


# ---------------------------------------------------------------------------
# document renderings (shared by the CLI and the service)
# ---------------------------------------------------------------------------


def assignment_to_document(assignment: Optional[Assignment]) -> Optional[dict]:
    if assignment is None:
        return None
    return {"triples": [list(t) for t in assignment.triples]}


def assignment_from_document(doc: dict, path: str = "team") -> Assignment:
    from .model import DocumentError

    if not isinstance(doc, dict) or "triples" not in doc:
        raise DocumentError(path, "expected an object with a 'triples' list")
    triples = doc["triples"]
    if not isinstance(triples, list):
        raise DocumentError(path + ".triples", "expected a list")
    out = []
    for i, row in enumerate(triples):
        if (
            not isinstance(row, (list, tuple))
            or len(row) != 3
            or not all(isinstance(x, str) for x in row)
        ):
            raise DocumentError(
                "%s.triples[%d]" % (path, i), "expected [employee, shift, skill]"
            )
        out.append(tuple(row))
    return Assignment.make(out)


def violation_to_document(v: Violation) -> dict:
    return {
        "kind": v.kind,
        "employees": list(v.employees),
        "shift": v.shift_id,
        "skill": v.skill_id,
        "extra": list(v.extra),
        "requiredCount": v.required_count,
        "actualCount": v.actual_count,
        "message": v.message(),
    }


def report_to_document(report: CheckReport) -> dict:
    return {
        "consistent": report.consistent,
        "violations": [violation_to_document(v) for v in report.violations],
    }


def outcome_to_document(outcome: SolveOutcome) -> dict:
    return {
        "status": outcome.status,
        "modeUsed": outcome.mode_used,
        "assignment": assignment_to_document(outcome.assignment),
        "alternatives": [assignment_to_document(a) for a in outcome.alternatives],
        "waivedPreferences": [
            violation_to_document(v) for v in outcome.waived_preferences
        ],
        "diagnostics": list(outcome.diagnostics),
    }
