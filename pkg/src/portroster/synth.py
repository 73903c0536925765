"""Synthetic instances and depots for tests, demos, and simulation seeds.

Everything here is deterministic: fixtures are fixed data, and the random
generators take explicit seeds.
"""

from __future__ import annotations

import datetime
import random
from dataclasses import replace

from .model import (
    EmployeeRecord,
    HistoryRecord,
    Parameters,
    RosterInstance,
    ShiftSpec,
    SkillSpec,
    make_instance,
)
from .store import MetaPlan, Snapshot, make_shift_id

# A fixed Monday, so a 7-day window never crosses a week boundary.
BASE_MONDAY = datetime.date(2026, 1, 5).toordinal()

DEPOT_SKILLS = (
    SkillSpec("dock"),
    SkillSpec("crane", heavy=True),
    SkillSpec("deck"),
    SkillSpec("safety", crucial=True),
)


def two_role_instance() -> RosterInstance:
    """Two employees, one shift needing one dock worker and one deck worker."""
    return make_instance(
        employees=[
            EmployeeRecord("e1", frozenset({"s1", "s2"})),
            EmployeeRecord("e2", frozenset({"s2"})),
        ],
        skills=[SkillSpec("s1"), SkillSpec("s2")],
        shifts=[ShiftSpec("sh", 8)],
        requirements=[("sh", "s1", 1), ("sh", "s2", 1)],
    )


def conflict_instance() -> RosterInstance:
    """Turnover wants e1 on the heavy skill while fairness wants e1 anywhere.

    Strictly unsatisfiable: e1 must take s1 (turnover) but then somebody else
    covers s2, which fairness forbids while e1 is cheaper.  The prioritized
    constraints let fairness yield between e1 and e2.
    """
    return make_instance(
        employees=[
            EmployeeRecord(
                "e1",
                frozenset({"s1", "s2"}),
                history=HistoryRecord.make(weekly=10, last_allocation={"s1": 100}),
            ),
            EmployeeRecord(
                "e2",
                frozenset({"s1", "s2"}),
                history=HistoryRecord.make(weekly=20, last_allocation={"s1": 200}),
            ),
        ],
        skills=[SkillSpec("s1", heavy=True), SkillSpec("s2")],
        shifts=[ShiftSpec("sh1", 8)],
        requirements=[("sh1", "s1", 1), ("sh1", "s2", 1)],
    )


def double_shift_instance() -> RosterInstance:
    """A 6h shift pair forming a double: small needs 1 dock, big needs 2."""
    day = BASE_MONDAY
    small = make_shift_id(day, 6)
    big = make_shift_id(day, 12)
    return make_instance(
        employees=[
            EmployeeRecord("e1", frozenset({"dock"})),
            EmployeeRecord("e2", frozenset({"dock"})),
            EmployeeRecord("e3", frozenset({"dock"})),
            EmployeeRecord("e4", frozenset({"dock"})),
        ],
        skills=[SkillSpec("dock")],
        shifts=[ShiftSpec(small, 6), ShiftSpec(big, 6, predecessor=small)],
        requirements=[(small, "dock", 1), (big, "dock", 2)],
        double_shift_links=[(small, big)],
    )


def large_instance(n_employees: int = 130) -> RosterInstance:
    """Single-shift harbour day at full headcount.

    Half the staff handles dock/deck, half crane/safety; weekly hours are
    equal (no fairness pressure) and crane allocation dates ascend with the
    id so the turnover order is total.
    """
    employees = []
    for i in range(1, n_employees + 1):
        name = "p%03d" % i
        if i % 2 == 1:
            skills = frozenset({"dock", "deck"})
            history = HistoryRecord.make(weekly=16)
        else:
            skills = frozenset({"crane", "safety"})
            history = HistoryRecord.make(
                weekly=16, last_allocation={"crane": BASE_MONDAY - 200 + i}
            )
        employees.append(EmployeeRecord(name, skills, history=history))
    shift = make_shift_id(BASE_MONDAY, 8)
    return make_instance(
        employees=employees,
        skills=DEPOT_SKILLS,
        shifts=[ShiftSpec(shift, 8)],
        requirements=[
            (shift, "dock", 20),
            (shift, "deck", 15),
            (shift, "crane", 18),
            (shift, "safety", 12),
        ],
    )


# ---------------------------------------------------------------------------
# random small instances (soundness suite)
# ---------------------------------------------------------------------------


def random_instance(
    seed: int,
    max_employees: int = 10,
    max_shifts: int = 3,
    max_skills: int = 4,
) -> RosterInstance:
    """A valid small instance with varied histories, absences, and exclusions."""
    rng = random.Random(seed)
    n_skills = rng.randint(2, max_skills)
    skills = []
    for i in range(n_skills):
        skills.append(
            SkillSpec(
                "sk%d" % (i + 1),
                heavy=(i == 0 and rng.random() < 0.7),
                crucial=(i == n_skills - 1 and rng.random() < 0.5),
            )
        )
    skill_ids = [s.id for s in skills]
    heavy_ids = {s.id for s in skills if s.heavy}

    n_employees = rng.randint(3, max_employees)
    employees = []
    for i in range(n_employees):
        held = frozenset(rng.sample(skill_ids, rng.randint(1, min(3, n_skills))))
        weekly = rng.choice([0, 0, 8, 8, 16, 16, 24])
        last = {
            sk: rng.choice([0, 50, 100, 100, 150])
            for sk in held & heavy_ids
        }
        employees.append(
            EmployeeRecord(
                "e%d" % (i + 1),
                held,
                history=HistoryRecord.make(
                    weekly=weekly, daily=rng.choice([0, 0, 4]), last_allocation=last
                ),
            )
        )

    n_shifts = rng.randint(1, max_shifts)
    shifts = [
        ShiftSpec("t%d" % (j + 1), rng.choice([6, 8, 8]))
        for j in range(n_shifts)
    ]

    requirements = []
    for shift in shifts:
        for sk in rng.sample(skill_ids, rng.randint(1, min(2, n_skills))):
            holders = sum(1 for e in employees if sk in e.skills)
            if holders == 0:
                continue
            requirements.append((shift.id, sk, rng.randint(1, min(2, holders))))
    if not requirements:
        sk = rng.choice([s for s in skill_ids if any(s in e.skills for e in employees)])
        requirements.append((shifts[0].id, sk, 1))

    exclusions = []
    if rng.random() < 0.3:
        e = rng.choice(employees)
        s = rng.choice(shifts)
        exclusions.append((e.id, s.id))

    if rng.random() < 0.25:
        e = rng.choice(employees)
        s = rng.choice(shifts)
        if (e.id, s.id) not in exclusions:
            employees = [
                replace_absence(x, s.id) if x.id == e.id else x for x in employees
            ]

    return make_instance(
        employees=employees,
        skills=skills,
        shifts=shifts,
        requirements=requirements,
        exclusions=exclusions,
    )


def replace_absence(employee: EmployeeRecord, shift_id: str) -> EmployeeRecord:
    return replace(employee, absences=employee.absences | {shift_id})


# ---------------------------------------------------------------------------
# the synthetic depot
# ---------------------------------------------------------------------------


def _depot_employees(n: int) -> list[EmployeeRecord]:
    employees = []
    for i in range(1, n + 1):
        name = "w%02d" % i
        if i <= n // 3:
            skills = frozenset({"dock", "deck"})
            history = HistoryRecord.make()
        elif i <= 2 * n // 3:
            skills = frozenset({"dock"})
            history = HistoryRecord.make()
        else:
            skills = frozenset({"crane", "safety"})
            history = HistoryRecord.make(
                last_allocation={"crane": BASE_MONDAY - 100 + i}
            )
        employees.append(EmployeeRecord(name, skills, history=history))
    return employees


def day_meta_plan(day: int, previous_night: str | None = None) -> MetaPlan:
    """Morning/evening/night plan for one day, chained for night rest.

    Only the morning asks for the heavy crane skill: a turnover-preferred
    employee who is busy on another shift of the same day would otherwise
    make every further crane slot unsatisfiable (the preference is per shift
    but employees work one shift a day).
    """
    morning = make_shift_id(day, 6)
    evening = make_shift_id(day, 14)
    night = make_shift_id(day, 22)
    return MetaPlan(
        id="plan_%d" % day,
        name="day plan %s" % datetime.date.fromordinal(day).isoformat(),
        day=day,
        shifts=(
            ShiftSpec(morning, 8, predecessor=previous_night),
            ShiftSpec(evening, 8, predecessor=morning),
            ShiftSpec(night, 8, predecessor=evening),
        ),
        requirements=(
            (morning, "dock", 3),
            (morning, "deck", 2),
            (morning, "crane", 2),
            (morning, "safety", 2),
            (evening, "dock", 2),
            (evening, "deck", 1),
            (evening, "safety", 2),
            (night, "dock", 1),
            (night, "safety", 1),
        ),
    )


def synthetic_depot(
    n_employees: int = 30, days: int = 7, start_day: int = BASE_MONDAY
) -> Snapshot:
    """A depot with one meta-plan per day over the window, nights chained."""
    plans = []
    previous_night = None
    for k in range(days):
        day = start_day + k
        plan = day_meta_plan(day, previous_night)
        plans.append(plan)
        previous_night = plan.shifts[-1].id
    base = make_instance(
        employees=_depot_employees(n_employees),
        skills=DEPOT_SKILLS,
        shifts=[],
        requirements=[],
        parameters=Parameters(fair_gap=16),
    )
    return Snapshot(instance=base, meta_plans=tuple(plans))


def generate_day_plan(day: int, seed: int) -> MetaPlan:
    """A seeded single-day plan for the simulate generator path."""
    rng = random.Random((seed * 8191 + day) % (2**31))
    morning = make_shift_id(day, 6)
    evening = make_shift_id(day, 14)
    requirements = [
        (morning, "dock", rng.randint(1, 3)),
        (morning, "crane", rng.randint(1, 2)),
        (evening, "dock", rng.randint(1, 2)),
        (evening, "safety", 1),
    ]
    return MetaPlan(
        id="gen_%d" % day,
        name="generated plan %s" % datetime.date.fromordinal(day).isoformat(),
        day=day,
        shifts=(ShiftSpec(morning, 8), ShiftSpec(evening, 8, predecessor=morning)),
        requirements=tuple(requirements),
    )
