"""Independent assignment validator.

Re-checks a team against the scheduling rules with plain loops and arithmetic
— no logic programs involved — so solver output can be cross-examined by an
implementation that shares nothing with the solver.
"""

from __future__ import annotations

from .model import RosterInstance, can_be_assigned


def audit_assignment(
    instance: RosterInstance,
    triples,
    *,
    include_preferences: bool = True,
    relaxed: bool = False,
) -> list[str]:
    """All rule breaches of a team, one human-readable line each.

    With ``relaxed`` the preference checks mirror the degraded mode: a
    turnover preference between two employees silences fairness between them,
    and either silences crucial-role balancing.  Turnover itself always
    applies.
    """
    problems: list[str] = []
    triples = sorted(set(tuple(t) for t in triples))
    doubles = set(instance.double_shift_links)
    linked = doubles | {(b, a) for a, b in doubles}

    by_requirement: dict[tuple[str, str], set[str]] = {
        (sh, sk): set() for sh, sk, _ in instance.requirements
    }
    shifts_of: dict[str, set[str]] = {}
    skills_on_shift: dict[tuple[str, str], set[str]] = {}

    for em, sh, sk in triples:
        if instance.employee(em) is None:
            problems.append("unknown employee %s" % em)
            continue
        if instance.shift(sh) is None:
            problems.append("unknown shift %s" % sh)
            continue
        if (sh, sk) not in by_requirement:
            problems.append("no requirement for (%s, %s) but %s assigned" % (sh, sk, em))
        else:
            by_requirement[(sh, sk)].add(em)
        if not can_be_assigned(instance, em, sh, sk):
            problems.append("%s not assignable to (%s, %s)" % (em, sh, sk))
        shifts_of.setdefault(em, set()).add(sh)
        skills_on_shift.setdefault((em, sh), set()).add(sk)

    for (sh, sk), present in sorted(by_requirement.items()):
        required = next(n for s2, k2, n in instance.requirements if (s2, k2) == (sh, sk))
        if len(present) != required:
            problems.append(
                "requirement (%s, %s) wants %d, team has %d" % (sh, sk, required, len(present))
            )

    for (em, sh), skills in sorted(skills_on_shift.items()):
        if len(skills) > 1:
            problems.append("%s covers %d roles on %s" % (em, len(skills), sh))

    for em, shifts in sorted(shifts_of.items()):
        for a in sorted(shifts):
            for b in sorted(shifts):
                if a < b and (a, b) not in linked:
                    problems.append("%s works unlinked shifts %s and %s" % (em, a, b))

    problems.extend(_audit_doubles(instance, triples, doubles))
    if include_preferences:
        problems.extend(_audit_preferences(instance, triples, relaxed))
    return problems


def _audit_doubles(instance, triples, doubles) -> list[str]:
    problems = []
    staff: dict[str, set[str]] = {}
    for em, sh, _ in triples:
        staff.setdefault(sh, set()).add(em)
    p = instance.parameters
    for small, big in sorted(doubles):
        for em in sorted(staff.get(small, set()) - staff.get(big, set())):
            problems.append("%s on double part %s but not on %s" % (em, small, big))
        small_spec, big_spec = instance.shift(small), instance.shift(big)
        if small_spec is None or big_spec is None:
            continue
        total = small_spec.duration + big_spec.duration
        for em in sorted(staff.get(small, set()) & staff.get(big, set())):
            h = instance.employee(em).history
            if h.weekly_hours + total > p.week_hours_max:
                problems.append("%s over weekly limit on double (%s, %s)" % (em, small, big))
            if h.daily_hours + total > p.daily_hours_max:
                problems.append("%s over daily limit on double (%s, %s)" % (em, small, big))
            if h.week_overtime_hours + total > p.week_overtime_max:
                problems.append("%s over overtime limit on double (%s, %s)" % (em, small, big))
    return problems


def preference_pairs(instance: RosterInstance) -> tuple[set, set]:
    """Symmetric employee pairs linked by a turnover / fairness preference."""
    employees = sorted(e.id for e in instance.employees)
    heavy = instance.heavy_skills()
    p = instance.parameters
    turnover_pairs: set[tuple[str, str]] = set()
    fairness_pairs: set[tuple[str, str]] = set()

    def last(em, sk):
        return instance.employee(em).history.last_allocation_map().get(sk, 0)

    def hours(em):
        return instance.employee(em).history.weekly_hours

    for sh, sk, _ in sorted(set(instance.requirements)):
        for e1 in employees:
            for e2 in employees:
                if e1 == e2:
                    continue
                if not (
                    can_be_assigned(instance, e1, sh, sk)
                    and can_be_assigned(instance, e2, sh, sk)
                ):
                    continue
                if sk in heavy and last(e1, sk) < last(e2, sk):
                    turnover_pairs.update({(e1, e2), (e2, e1)})
                if hours(e1) + p.fair_gap < hours(e2):
                    fairness_pairs.update({(e1, e2), (e2, e1)})
    return turnover_pairs, fairness_pairs


def _audit_preferences(instance, triples, relaxed) -> list[str]:
    problems = []
    assigned = set(triples)
    employees = sorted(e.id for e in instance.employees)
    heavy = instance.heavy_skills()
    crucial = instance.crucial_skills()
    p = instance.parameters
    turnover_pairs, fairness_pairs = (
        preference_pairs(instance) if relaxed else (set(), set())
    )

    def hours(em):
        return instance.employee(em).history.weekly_hours

    def crucial_count(em):
        return len(instance.employee(em).skills & crucial)

    def last(em, sk):
        return instance.employee(em).history.last_allocation_map().get(sk, 0)

    for sh, sk, _ in sorted(set(instance.requirements)):
        for e1 in employees:
            for e2 in employees:
                if e1 == e2:
                    continue
                if not (
                    can_be_assigned(instance, e1, sh, sk)
                    and can_be_assigned(instance, e2, sh, sk)
                ):
                    continue
                if not ((e2, sh, sk) in assigned and (e1, sh, sk) not in assigned):
                    continue
                if sk in heavy and last(e1, sk) < last(e2, sk):
                    problems.append("turnover prefers %s over %s on (%s, %s)" % (e1, e2, sh, sk))
                if hours(e1) + p.fair_gap < hours(e2):
                    if not (relaxed and (e1, e2) in turnover_pairs):
                        problems.append(
                            "fairness prefers %s over %s on (%s, %s)" % (e1, e2, sh, sk)
                        )
                if crucial_count(e1) < crucial_count(e2):
                    if not (relaxed and (e1, e2) in (turnover_pairs | fairness_pairs)):
                        problems.append(
                            "crucial-role balance prefers %s over %s on (%s, %s)"
                            % (e1, e2, sh, sk)
                        )
    return problems
