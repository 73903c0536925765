"""Domain model for the team-building problem and its fact-base emission.

Instances collect employees, skills, shifts, per-shift skill requirements,
double-shift links, working-time parameters, pre-assignments, and exclusions.
`instance_to_facts` turns an instance into the input fact base consumed by the
rule encodings; `validate_instance` reports structural problems as data.

Identifiers double as logic-program symbol constants, so they must start with
a lowercase letter (checked during validation).  Dates travel as ISO-8601
strings in documents and as proleptic-Gregorian day ordinals internally.
"""

from __future__ import annotations

import datetime
import re
from dataclasses import dataclass, field, replace
from typing import Optional

from .asp.syntax import Program, Rule, StandardAtom, num, sym

SYMBOL_RE = re.compile(r"^[a-z][A-Za-z0-9_]*$")

DEFAULT_DAILY_HOURS_MAX = 12
DEFAULT_WEEK_HOURS_MAX = 48
DEFAULT_WEEK_OVERTIME_MAX = 12
DEFAULT_FAIR_GAP = 8

SHIFT_DURATION_SOFT_RANGE = (6, 12)

ERROR = "error"
WARNING = "warning"


class DocumentError(Exception):
    """A structured document did not match the expected shape."""

    def __init__(self, path: str, message: str):
        super().__init__("%s: %s" % (path, message))
        self.path = path


@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # ERROR or WARNING
    code: str
    message: str

    def __str__(self) -> str:
        return "%s [%s]: %s" % (self.severity, self.code, self.message)


@dataclass(frozen=True)
class Parameters:
    daily_hours_max: int = DEFAULT_DAILY_HOURS_MAX
    week_hours_max: int = DEFAULT_WEEK_HOURS_MAX
    week_overtime_max: int = DEFAULT_WEEK_OVERTIME_MAX
    fair_gap: int = DEFAULT_FAIR_GAP

    @property
    def regular_week_hours(self) -> int:
        """Hours per week before overtime accrual begins (48 - 12 = 36)."""
        return self.week_hours_max - self.week_overtime_max


@dataclass(frozen=True)
class HistoryRecord:
    weekly_hours: int = 0
    daily_hours: int = 0
    week_overtime_hours: int = 0
    # skill id -> day ordinal of the last allocation on that skill
    last_allocation: tuple[tuple[str, int], ...] = ()

    def last_allocation_map(self) -> dict[str, int]:
        return dict(self.last_allocation)

    @staticmethod
    def make(weekly=0, daily=0, overtime=0, last_allocation=None) -> "HistoryRecord":
        items = tuple(sorted((last_allocation or {}).items()))
        return HistoryRecord(weekly, daily, overtime, items)


@dataclass(frozen=True)
class EmployeeRecord:
    id: str
    skills: frozenset[str]
    absences: frozenset[str] = frozenset()
    history: HistoryRecord = HistoryRecord()


@dataclass(frozen=True)
class SkillSpec:
    id: str
    heavy: bool = False
    crucial: bool = False


@dataclass(frozen=True)
class ShiftSpec:
    id: str
    duration: int
    predecessor: Optional[str] = None


@dataclass(frozen=True)
class RosterInstance:
    employees: tuple[EmployeeRecord, ...]
    skills: tuple[SkillSpec, ...]
    shifts: tuple[ShiftSpec, ...]
    requirements: tuple[tuple[str, str, int], ...]  # (shift, skill, count)
    double_shift_links: tuple[tuple[str, str], ...] = ()  # (small, big)
    parameters: Parameters = Parameters()
    pre_assignments: tuple[tuple[str, str, str], ...] = ()  # (emp, shift, skill)
    exclusions: tuple[tuple[str, str], ...] = ()  # (emp, shift)

    def employee(self, emp_id: str) -> Optional[EmployeeRecord]:
        for e in self.employees:
            if e.id == emp_id:
                return e
        return None

    def skill(self, skill_id: str) -> Optional[SkillSpec]:
        for s in self.skills:
            if s.id == skill_id:
                return s
        return None

    def shift(self, shift_id: str) -> Optional[ShiftSpec]:
        for s in self.shifts:
            if s.id == shift_id:
                return s
        return None

    def heavy_skills(self) -> frozenset[str]:
        return frozenset(s.id for s in self.skills if s.heavy)

    def crucial_skills(self) -> frozenset[str]:
        return frozenset(s.id for s in self.skills if s.crucial)

    def required_total(self, shift_id: str) -> int:
        return sum(n for sh, _, n in self.requirements if sh == shift_id)


def make_instance(
    employees,
    skills,
    shifts,
    requirements,
    double_shift_links=(),
    parameters=Parameters(),
    pre_assignments=(),
    exclusions=(),
) -> RosterInstance:
    return RosterInstance(
        employees=tuple(employees),
        skills=tuple(skills),
        shifts=tuple(shifts),
        requirements=tuple(tuple(r) for r in requirements),
        double_shift_links=tuple(tuple(d) for d in double_shift_links),
        parameters=parameters,
        pre_assignments=tuple(tuple(p) for p in pre_assignments),
        exclusions=tuple(tuple(x) for x in exclusions),
    )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def exceeds_time_limits(
    employee: EmployeeRecord, shift: ShiftSpec, parameters: Parameters
) -> bool:
    h = employee.history
    d = shift.duration
    return (
        d + h.weekly_hours > parameters.week_hours_max
        or d + h.daily_hours > parameters.daily_hours_max
        or d + h.week_overtime_hours > parameters.week_overtime_max
    )


def can_be_assigned(
    instance: RosterInstance, emp_id: str, shift_id: str, skill_id: str
) -> bool:
    """The eligibility test: skilled, needed, present, not excluded, in limits."""
    employee = instance.employee(emp_id)
    shift = instance.shift(shift_id)
    if employee is None or shift is None:
        return False
    if skill_id not in employee.skills:
        return False
    if not any(sh == shift_id and sk == skill_id for sh, sk, _ in instance.requirements):
        return False
    if shift_id in employee.absences:
        return False
    if (emp_id, shift_id) in instance.exclusions:
        return False
    if exceeds_time_limits(employee, shift, instance.parameters):
        return False
    return True


def validate_instance(instance: RosterInstance) -> list[ValidationIssue]:
    issues: list[ValidationIssue] = []

    def error(code, message):
        issues.append(ValidationIssue(ERROR, code, message))

    def warning(code, message):
        issues.append(ValidationIssue(WARNING, code, message))

    skill_ids = {s.id for s in instance.skills}
    shift_ids = {s.id for s in instance.shifts}
    employee_ids = set()

    for name in sorted(
        {e.id for e in instance.employees} | skill_ids | shift_ids
    ):
        if not SYMBOL_RE.match(name):
            error("bad-identifier", "identifier %r is not a lowercase symbol" % name)

    if len(skill_ids) != len(instance.skills):
        error("duplicate-skill", "duplicate skill identifiers")
    if len(shift_ids) != len(instance.shifts):
        error("duplicate-shift", "duplicate shift identifiers")

    for employee in instance.employees:
        if employee.id in employee_ids:
            error("duplicate-employee", "duplicate employee id %r" % employee.id)
        employee_ids.add(employee.id)
        if not employee.skills:
            error("no-skills", "employee %r has no skills" % employee.id)
        for sk in sorted(employee.skills - skill_ids):
            error("unknown-skill", "employee %r lists unknown skill %r" % (employee.id, sk))
        for sh in sorted(employee.absences - shift_ids):
            warning(
                "unknown-absence-shift",
                "employee %r absent from unknown shift %r" % (employee.id, sh),
            )
        h = employee.history
        if min(h.weekly_hours, h.daily_hours, h.week_overtime_hours) < 0:
            error("negative-hours", "employee %r has negative hour counters" % employee.id)
        if h.week_overtime_hours > h.weekly_hours:
            error(
                "overtime-exceeds-weekly",
                "employee %r has more overtime than weekly hours" % employee.id,
            )
        for sk, day in h.last_allocation:
            if sk not in skill_ids:
                error(
                    "unknown-allocation-skill",
                    "employee %r has a last allocation on unknown skill %r"
                    % (employee.id, sk),
                )
            if day < 0:
                error("negative-date", "employee %r allocation date below zero" % employee.id)

    for shift in instance.shifts:
        if shift.duration < 1:
            error("bad-duration", "shift %r has duration %d" % (shift.id, shift.duration))
        elif not (
            SHIFT_DURATION_SOFT_RANGE[0] <= shift.duration <= SHIFT_DURATION_SOFT_RANGE[1]
        ):
            warning(
                "unusual-duration",
                "shift %r lasts %d hours (expected 6-12)" % (shift.id, shift.duration),
            )
        if shift.predecessor is not None and shift.predecessor not in shift_ids:
            # a day plan's first shift may point at the previous day's last
            warning(
                "unknown-predecessor",
                "shift %r names predecessor %r outside this instance"
                % (shift.id, shift.predecessor),
            )

    seen_requirements = set()
    for sh, sk, n in instance.requirements:
        if sh not in shift_ids:
            error("unknown-requirement-shift", "requirement names unknown shift %r" % sh)
        if sk not in skill_ids:
            error("unknown-requirement-skill", "requirement names unknown skill %r" % sk)
        if n < 1:
            error("bad-requirement-count", "requirement (%s,%s) asks for %d" % (sh, sk, n))
        if (sh, sk) in seen_requirements:
            error("duplicate-requirement", "two requirement rows for (%s,%s)" % (sh, sk))
        seen_requirements.add((sh, sk))

    for small, big in instance.double_shift_links:
        if small not in shift_ids or big not in shift_ids:
            error("unknown-double-shift", "double link (%s,%s) names unknown shifts" % (small, big))
            continue
        if instance.required_total(small) > instance.required_total(big):
            error(
                "double-count-order",
                "double link (%s,%s): the first shift requires more employees"
                % (small, big),
            )
        big_spec = instance.shift(big)
        if big_spec.predecessor != small:
            error(
                "double-not-consecutive",
                "double link (%s,%s): shifts are not consecutive" % (small, big),
            )

    pre_seen = set()
    for em, sh, sk in instance.pre_assignments:
        if (em, sh) in instance.exclusions:
            error(
                "pre-assignment-excluded",
                "employee %r both pre-assigned and excluded on shift %r" % (em, sh),
            )
        if (em, sh, sk) in pre_seen:
            error("duplicate-pre-assignment", "duplicate pre-assignment (%s,%s,%s)" % (em, sh, sk))
        pre_seen.add((em, sh, sk))
        employee = instance.employee(em)
        if employee is None:
            error("unknown-pre-assignment-employee", "pre-assignment names unknown employee %r" % em)
            continue
        if sh not in shift_ids:
            error("unknown-pre-assignment-shift", "pre-assignment names unknown shift %r" % sh)
            continue
        if sk not in employee.skills:
            error(
                "pre-assignment-skill-mismatch",
                "employee %r lacks skill %r for a pre-assignment" % (em, sk),
            )
        elif not can_be_assigned(instance, em, sh, sk):
            error(
                "pre-assignment-not-assignable",
                "pre-assignment (%s,%s,%s) fails the eligibility conditions" % (em, sh, sk),
            )

    for em, sh in instance.exclusions:
        if instance.employee(em) is None:
            error("unknown-exclusion-employee", "exclusion names unknown employee %r" % em)
        if sh not in shift_ids:
            error("unknown-exclusion-shift", "exclusion names unknown shift %r" % sh)

    return issues


# ---------------------------------------------------------------------------
# fact emission
# ---------------------------------------------------------------------------


def derive_crucial_counts(instance: RosterInstance) -> dict[str, int]:
    crucial = instance.crucial_skills()
    return {e.id: len(e.skills & crucial) for e in instance.employees}


def _fact(pred: str, *consts) -> Rule:
    args = tuple(num(c) if isinstance(c, int) else sym(c) for c in consts)
    return Rule((StandardAtom(pred, args),), ())


def instance_to_facts(
    instance: RosterInstance, *, include_pre_assignments: bool = True
) -> Program:
    """The fact base: one fact per input tuple, hour counters for everyone.

    Hour and crucial-skill counters are emitted for every employee (zero when
    the history is silent) so joins over them never lose an employee, and
    heavy-skill allocation dates default to day 0, which sorts a never-
    allocated employee first in the turnover order.
    """
    facts: list[Rule] = []
    p = instance.parameters

    for employee in sorted(instance.employees, key=lambda e: e.id):
        for sk in sorted(employee.skills):
            facts.append(_fact("hasSkill", employee.id, sk))
        for sh in sorted(employee.absences):
            facts.append(_fact("absent", employee.id, sh))

    for em, sh in sorted(instance.exclusions):
        facts.append(_fact("manuallyExcluded", em, sh))

    for shift in instance.shifts:
        facts.append(_fact("shift", shift.id, shift.duration))
        if shift.predecessor is not None:
            facts.append(_fact("previousShift", shift.id, shift.predecessor))

    for sh, sk, n in sorted(instance.requirements):
        facts.append(_fact("neededEmployees", sh, sk, n))

    for employee in sorted(instance.employees, key=lambda e: e.id):
        h = employee.history
        facts.append(_fact("workedWeeklyHours", employee.id, h.weekly_hours))
        facts.append(_fact("workedDailyHours", employee.id, h.daily_hours))
        facts.append(_fact("workedWeekOvertimeHours", employee.id, h.week_overtime_hours))

    facts.append(_fact("dailyHours", p.daily_hours_max))
    facts.append(_fact("weekHours", p.week_hours_max))
    facts.append(_fact("weekOvertime", p.week_overtime_max))
    facts.append(_fact("fairGap", p.fair_gap))

    heavy = sorted(instance.heavy_skills())
    for sk in heavy:
        facts.append(_fact("heavyRole", sk))
    for employee in sorted(instance.employees, key=lambda e: e.id):
        last = employee.history.last_allocation_map()
        for sk in heavy:
            if sk in employee.skills:
                facts.append(_fact("lastAllocation", employee.id, sk, last.get(sk, 0)))

    crucial_counts = derive_crucial_counts(instance)
    for sk in sorted(instance.crucial_skills()):
        facts.append(_fact("crucialRole", sk))
    for employee in sorted(instance.employees, key=lambda e: e.id):
        facts.append(_fact("hasCrucial", employee.id, crucial_counts[employee.id]))

    for small, big in sorted(instance.double_shift_links):
        facts.append(_fact("isDouble", small, big))

    if include_pre_assignments:
        for em, sh, sk in sorted(instance.pre_assignments):
            facts.append(_fact("assign", em, sh, sk))

    return Program(tuple(facts))


# ---------------------------------------------------------------------------
# document (de)serialization
# ---------------------------------------------------------------------------


def day_to_iso(day: int) -> str:
    return datetime.date.fromordinal(day).isoformat()


def iso_to_day(text: str, path: str = "date") -> int:
    try:
        return datetime.date.fromisoformat(text).toordinal()
    except (TypeError, ValueError):
        raise DocumentError(path, "not an ISO-8601 date: %r" % (text,))


def _expect(doc: dict, key: str, kind, path: str):
    if key not in doc:
        raise DocumentError("%s.%s" % (path, key) if path else key, "missing key")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise DocumentError(
            "%s.%s" % (path, key) if path else key,
            "expected %s, found %s" % (kind.__name__, type(value).__name__),
        )
    return value


def instance_to_document(instance: RosterInstance) -> dict:
    return {
        "employees": [
            {
                "id": e.id,
                "skills": sorted(e.skills),
                "absences": sorted(e.absences),
                "history": {
                    "weeklyHours": e.history.weekly_hours,
                    "dailyHours": e.history.daily_hours,
                    "weekOvertimeHours": e.history.week_overtime_hours,
                    "lastAllocation": {
                        sk: day_to_iso(day) for sk, day in e.history.last_allocation
                    },
                },
            }
            for e in instance.employees
        ],
        "skills": [
            {"id": s.id, "heavy": s.heavy, "crucial": s.crucial} for s in instance.skills
        ],
        "shifts": [
            {"id": s.id, "duration": s.duration, "predecessor": s.predecessor}
            for s in instance.shifts
        ],
        "requirements": [
            {"shift": sh, "skill": sk, "count": n} for sh, sk, n in instance.requirements
        ],
        "doubleShifts": [
            {"small": a, "big": b} for a, b in instance.double_shift_links
        ],
        "parameters": {
            "dailyHoursMax": instance.parameters.daily_hours_max,
            "weekHoursMax": instance.parameters.week_hours_max,
            "weekOvertimeMax": instance.parameters.week_overtime_max,
            "fairGap": instance.parameters.fair_gap,
        },
        "preAssignments": [
            {"employee": em, "shift": sh, "skill": sk}
            for em, sh, sk in instance.pre_assignments
        ],
        "exclusions": [
            {"employee": em, "shift": sh} for em, sh in instance.exclusions
        ],
    }


def instance_from_document(doc: dict, path: str = "") -> RosterInstance:
    if not isinstance(doc, dict):
        raise DocumentError(path or ".", "instance document must be an object")
    employees = []
    for i, entry in enumerate(_expect(doc, "employees", list, path)):
        epath = "%s.employees[%d]" % (path, i) if path else "employees[%d]" % i
        history = entry.get("history", {})
        if not isinstance(history, dict):
            raise DocumentError(epath + ".history", "expected an object")
        last = {
            sk: iso_to_day(text, "%s.history.lastAllocation.%s" % (epath, sk))
            for sk, text in history.get("lastAllocation", {}).items()
        }
        employees.append(
            EmployeeRecord(
                id=_expect(entry, "id", str, epath),
                skills=frozenset(_expect(entry, "skills", list, epath)),
                absences=frozenset(entry.get("absences", [])),
                history=HistoryRecord.make(
                    weekly=history.get("weeklyHours", 0),
                    daily=history.get("dailyHours", 0),
                    overtime=history.get("weekOvertimeHours", 0),
                    last_allocation=last,
                ),
            )
        )
    skills = [
        SkillSpec(
            id=_expect(entry, "id", str, "%s.skills[%d]" % (path, i)),
            heavy=bool(entry.get("heavy", False)),
            crucial=bool(entry.get("crucial", False)),
        )
        for i, entry in enumerate(_expect(doc, "skills", list, path))
    ]
    shifts = [
        ShiftSpec(
            id=_expect(entry, "id", str, "%s.shifts[%d]" % (path, i)),
            duration=_expect(entry, "duration", int, "%s.shifts[%d]" % (path, i)),
            predecessor=entry.get("predecessor"),
        )
        for i, entry in enumerate(_expect(doc, "shifts", list, path))
    ]
    requirements = [
        (
            _expect(entry, "shift", str, "%s.requirements[%d]" % (path, i)),
            _expect(entry, "skill", str, "%s.requirements[%d]" % (path, i)),
            _expect(entry, "count", int, "%s.requirements[%d]" % (path, i)),
        )
        for i, entry in enumerate(_expect(doc, "requirements", list, path))
    ]
    doubles = [
        (
            _expect(entry, "small", str, "%s.doubleShifts[%d]" % (path, i)),
            _expect(entry, "big", str, "%s.doubleShifts[%d]" % (path, i)),
        )
        for i, entry in enumerate(doc.get("doubleShifts", []))
    ]
    pdoc = _expect(doc, "parameters", dict, path)
    parameters = Parameters(
        daily_hours_max=pdoc.get("dailyHoursMax", DEFAULT_DAILY_HOURS_MAX),
        week_hours_max=pdoc.get("weekHoursMax", DEFAULT_WEEK_HOURS_MAX),
        week_overtime_max=pdoc.get("weekOvertimeMax", DEFAULT_WEEK_OVERTIME_MAX),
        fair_gap=pdoc.get("fairGap", DEFAULT_FAIR_GAP),
    )
    pre = [
        (
            _expect(entry, "employee", str, "%s.preAssignments[%d]" % (path, i)),
            _expect(entry, "shift", str, "%s.preAssignments[%d]" % (path, i)),
            _expect(entry, "skill", str, "%s.preAssignments[%d]" % (path, i)),
        )
        for i, entry in enumerate(doc.get("preAssignments", []))
    ]
    exclusions = [
        (
            _expect(entry, "employee", str, "%s.exclusions[%d]" % (path, i)),
            _expect(entry, "shift", str, "%s.exclusions[%d]" % (path, i)),
        )
        for i, entry in enumerate(doc.get("exclusions", []))
    ]
    return make_instance(
        employees, skills, shifts, requirements, doubles, parameters, pre, exclusions
    )


def merge_shift_sections(
    base: RosterInstance,
    shifts,
    requirements,
    doubles=(),
    pre_assignments=(),
    exclusions=(),
) -> RosterInstance:
    """A copy of base with shift-related sections replaced/extended."""
    return replace(
        base,
        shifts=tuple(shifts),
        requirements=tuple(tuple(r) for r in requirements),
        double_shift_links=tuple(tuple(d) for d in doubles),
        pre_assignments=base.pre_assignments + tuple(tuple(x) for x in pre_assignments),
        exclusions=base.exclusions + tuple(tuple(x) for x in exclusions),
    )
