"""Rule encodings for building, checking, and explaining shift teams.

Four modes share one library of rule templates:

* ``strict``      — guess assignments, enforce every hard and preference
                    constraint.
* ``prioritized`` — same, but fairness yields to turnover and crucial-role
                    balancing yields to both, on a per-employee-pair basis.
* ``check``       — no guessing; the team arrives as ``assign`` facts and the
                    constraints reject inconsistent ones.
* ``explain``     — every constraint becomes a rule deriving a ``violated*``
                    atom, so the single answer set lists all violations.

The encodings are returned as parsed programs; callers append the instance
fact base before grounding.
"""

from __future__ import annotations

from .asp.parser import parse_program
from .asp.syntax import Program

STRICT = "strict"
PRIORITIZED = "prioritized"
CHECK = "check"
EXPLAIN = "explain"

MODES = (STRICT, PRIORITIZED, CHECK, EXPLAIN)

# Atoms produced by the guessing part; everything else in an answer set is
# input or derived bookkeeping.
ASSIGN_PREDICATE = "assign"
REJECT_PREDICATE = "nAssign"

VIOLATION_PREDICATES = (
    "violatedCount",
    "violatedMultiRole",
    "violatedMultiShift",
    "violatedTimeLimit",
    "violatedEligibility",
    "violatedDoubleShift",
    "violatedDoubleTime",
    "violatedTurnover",
    "violatedFairness",
    "violatedCrucial",
)

_ELIGIBILITY = """
exceedTimeLimit(Em, Sh) :- shift(Sh, D), workedWeeklyHours(Em, Wh),
                           weekHours(Hmax), D + Wh > Hmax.
exceedTimeLimit(Em, Sh) :- shift(Sh, D), dailyHours(Hmax),
                           workedDailyHours(Em, Wh), D + Wh > Hmax.
exceedTimeLimit(Em, Sh) :- shift(Sh, D), weekOvertime(Hmax),
                           workedWeekOvertimeHours(Em, Wh), D + Wh > Hmax.
canBeAssigned(Em, Sh, Sk) :- hasSkill(Em, Sk), neededEmployees(Sh, Sk, _),
                             not absent(Em, Sh), not manuallyExcluded(Em, Sh),
                             not exceedTimeLimit(Em, Sh).
"""

_GUESS = """
assign(Em, Sh, Sk) v nAssign(Em, Sh, Sk) :- canBeAssigned(Em, Sh, Sk).
"""

_PREFERENCES = """
prefByTurnover(Em1, Em2, Sh, Sk) :- heavyRole(Sk),
    canBeAssigned(Em1, Sh, Sk), canBeAssigned(Em2, Sh, Sk),
    lastAllocation(Em1, Sk, Date1), lastAllocation(Em2, Sk, Date2),
    Date1 < Date2.
prefByFairness(Em1, Em2, Sh, Sk) :- fairGap(MaxGap),
    workedWeeklyHours(Em1, Wh1), workedWeeklyHours(Em2, Wh2),
    canBeAssigned(Em1, Sh, Sk), canBeAssigned(Em2, Sh, Sk),
    Wh1 + MaxGap < Wh2.
prefByCrucial(Em1, Em2, Sh, Sk) :- hasCrucial(Em1, N1), hasCrucial(Em2, N2),
    canBeAssigned(Em1, Sh, Sk), canBeAssigned(Em2, Sh, Sk),
    N1 < N2.
"""

# Symmetric employee-pair projections: a preference of either orientation
# between two employees silences every lower-priority preference between the
# same two employees, whatever shift or skill either preference talks about.
_PAIR_PROJECTIONS = """
turnoverPair(Em1, Em2) :- prefByTurnover(Em1, Em2, _, _).
turnoverPair(Em2, Em1) :- prefByTurnover(Em1, Em2, _, _).
fairnessPair(Em1, Em2) :- prefByFairness(Em1, Em2, _, _).
fairnessPair(Em2, Em1) :- prefByFairness(Em1, Em2, _, _).
"""

_DOUBLE_SUPPORT = """
assigned(Em, Sh) :- assign(Em, Sh, _).
doubleLinked(Sh1, Sh2) :- isDouble(Sh1, Sh2).
doubleLinked(Sh2, Sh1) :- isDouble(Sh1, Sh2).
"""

# constraint name -> body (without ":-"), grouped by concern
_HARD_BODIES = {
    "count": "neededEmployees(Sh, Sk, EmpNum), #count{Em: assign(Em, Sh, Sk)} != EmpNum",
    "multiRole": "assign(Em, Sh, Sk1), assign(Em, Sh, Sk2), Sk1 != Sk2",
    "multiShift": "assign(Em, Sh1, _), assign(Em, Sh2, _), Sh1 != Sh2",
    "multiShiftDouble": (
        "assign(Em, Sh1, _), assign(Em, Sh2, _), Sh1 != Sh2, "
        "not doubleLinked(Sh1, Sh2)"
    ),
}

_DOUBLE_BODIES = {
    "doubleShift": "isDouble(Shs, Shb), assigned(Em, Shs), not assigned(Em, Shb)",
    "doubleWeekly": (
        "isDouble(Sh1, Sh2), assigned(Em, Sh1), assigned(Em, Sh2), "
        "shift(Sh1, D1), shift(Sh2, D2), workedWeeklyHours(Em, Wh), "
        "weekHours(Hmax), Wh + D1 + D2 > Hmax"
    ),
    "doubleDaily": (
        "isDouble(Sh1, Sh2), assigned(Em, Sh1), assigned(Em, Sh2), "
        "shift(Sh1, D1), shift(Sh2, D2), workedDailyHours(Em, Wh), "
        "dailyHours(Hmax), Wh + D1 + D2 > Hmax"
    ),
    "doubleOvertime": (
        "isDouble(Sh1, Sh2), assigned(Em, Sh1), assigned(Em, Sh2), "
        "shift(Sh1, D1), shift(Sh2, D2), workedWeekOvertimeHours(Em, Wh), "
        "weekOvertime(Hmax), Wh + D1 + D2 > Hmax"
    ),
}

_PREFERENCE_BODY = "%s(Em1, Em2, Sh, Sk), assign(Em2, Sh, Sk), not assign(Em1, Sh, Sk)"

# Guards appended to a preference body in prioritized mode; fairness defers to
# turnover, crucial-role balancing defers to both.
_RELAXATION_GUARDS = {
    "prefByTurnover": "",
    "prefByFairness": ", not turnoverPair(Em1, Em2)",
    "prefByCrucial": ", not turnoverPair(Em1, Em2), not fairnessPair(Em1, Em2)",
}

# Kinds assigned at check time only: a team member who exceeds the working
# time limits, or who fails any other eligibility condition.
_CHECK_BODIES = {
    "timeLimit": "assign(Em, Sh, _), exceedTimeLimit(Em, Sh)",
    "eligibility": (
        "assign(Em, Sh, Sk), not canBeAssigned(Em, Sh, Sk), "
        "not exceedTimeLimit(Em, Sh)"
    ),
}

# violation head -> (constraint key, head arguments)
_VIOLATION_HEADS = {
    "count": ("violatedCount", "(Sh, Sk, EmpNum)"),
    "multiRole": ("violatedMultiRole", "(Em, Sh, Sk1, Sk2)"),
    "multiShift": ("violatedMultiShift", "(Em, Sh1, Sh2)"),
    "multiShiftDouble": ("violatedMultiShift", "(Em, Sh1, Sh2)"),
    "timeLimit": ("violatedTimeLimit", "(Em, Sh)"),
    "eligibility": ("violatedEligibility", "(Em, Sh, Sk)"),
    "doubleShift": ("violatedDoubleShift", "(Em, Shs, Shb)"),
    "doubleWeekly": ("violatedDoubleTime", "(Em, Sh1, Sh2, weekly)"),
    "doubleDaily": ("violatedDoubleTime", "(Em, Sh1, Sh2, daily)"),
    "doubleOvertime": ("violatedDoubleTime", "(Em, Sh1, Sh2, overtime)"),
    "prefByTurnover": ("violatedTurnover", "(Em1, Em2, Sh, Sk)"),
    "prefByFairness": ("violatedFairness", "(Em1, Em2, Sh, Sk)"),
    "prefByCrucial": ("violatedCrucial", "(Em1, Em2, Sh, Sk)"),
}


def _constraint_bodies(has_double_shifts: bool, relaxed: bool) -> list[tuple[str, str]]:
    bodies: list[tuple[str, str]] = [("count", _HARD_BODIES["count"]),
                                     ("multiRole", _HARD_BODIES["multiRole"])]
    if has_double_shifts:
        bodies.append(("multiShiftDouble", _HARD_BODIES["multiShiftDouble"]))
        bodies.extend(sorted(_DOUBLE_BODIES.items()))
    else:
        bodies.append(("multiShift", _HARD_BODIES["multiShift"]))
    for pref in ("prefByTurnover", "prefByFairness", "prefByCrucial"):
        body = _PREFERENCE_BODY % pref
        if relaxed:
            body += _RELAXATION_GUARDS[pref]
        bodies.append((pref, body))
    return bodies


def build_encoding(
    mode: str, has_double_shifts: bool = False, *, relaxed: bool | None = None
) -> Program:
    """The rules for one operating mode, as a parsed program.

    ``relaxed`` switches check/explain to the prioritized constraint set; the
    solve modes fix it (strict=False, prioritized=True).
    """
    if mode not in MODES:
        raise ValueError("unknown encoding mode %r" % mode)
    if mode == STRICT:
        relaxed = False
    elif mode == PRIORITIZED:
        relaxed = True
    elif relaxed is None:
        relaxed = False

    parts: list[str] = [_ELIGIBILITY]
    if mode in (STRICT, PRIORITIZED):
        parts.append(_GUESS)
    parts.append(_PREFERENCES)
    if relaxed:
        parts.append(_PAIR_PROJECTIONS)
    if has_double_shifts:
        parts.append(_DOUBLE_SUPPORT)

    bodies = _constraint_bodies(has_double_shifts, relaxed)
    if mode in (CHECK, EXPLAIN):
        bodies.extend(sorted(_CHECK_BODIES.items()))

    for key, body in bodies:
        if mode == EXPLAIN:
            head, args = _VIOLATION_HEADS[key]
            parts.append("%s%s :- %s." % (head, args, body))
        else:
            parts.append(":- %s." % body)

    return parse_program("\n".join(parts))
