"""Depot persistence: employees, meta-plans, committed plans, and history.

A depot is one JSON document updated through optimistic revision locking:
`save_snapshot` refuses to overwrite a file whose revision differs from the
snapshot it was loaded at, and writes go to a temporary file swapped into
place.  `apply_assignment_to_history` folds a committed day plan into the
per-employee counters (daily/weekly/overtime hours, last heavy-skill
allocation) and inserts rest absences after night shifts.

Shift identifiers follow the convention ``d<day-ordinal>h<start-hour>``
(e.g. ``d738526h22``); the start hour drives night-shift detection.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
import os
import re
import tempfile
from dataclasses import dataclass, replace
from typing import Optional

from filelock import FileLock

from .engine import Assignment, assignment_from_document, assignment_to_document
from .model import (
    DocumentError,
    HistoryRecord,
    RosterInstance,
    ShiftSpec,
    day_to_iso,
    instance_from_document,
    instance_to_document,
    iso_to_day,
    merge_shift_sections,
)

SHIFT_ID_RE = re.compile(r"^d(\d+)h(\d{2})$")

# 2001-01-01 was a Monday; week indexes count Monday-started weeks from it.
WEEK_ANCHOR = datetime.date(2001, 1, 1).toordinal()


class StoreError(Exception):
    pass


class MissingDepotError(StoreError):
    pass


class RevisionConflictError(StoreError):
    pass


@dataclass(frozen=True)
class NightRestConfig:
    night_start_hour: int = 22
    night_end_hour: int = 6
    rest_depth: int = 1  # how many follower shifts stay blocked


@dataclass(frozen=True)
class MetaPlan:
    id: str
    name: str
    day: Optional[int]  # day ordinal this plan is scheduled for
    shifts: tuple[ShiftSpec, ...]
    requirements: tuple[tuple[str, str, int], ...]
    double_links: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class Snapshot:
    instance: RosterInstance  # base: employees, skills, parameters
    meta_plans: tuple[MetaPlan, ...] = ()
    committed_plans: tuple[tuple[int, Assignment], ...] = ()  # (day, plan)
    revision: int = 0

    def meta_plan(self, plan_id: str) -> Optional[MetaPlan]:
        for plan in self.meta_plans:
            if plan.id == plan_id:
                return plan
        return None

    def plans_for_day(self, day: int) -> tuple[MetaPlan, ...]:
        return tuple(p for p in self.meta_plans if p.day == day)

    def shift_catalog(self) -> dict[str, ShiftSpec]:
        catalog = {s.id: s for s in self.instance.shifts}
        for plan in self.meta_plans:
            catalog.update({s.id: s for s in plan.shifts})
        return catalog


def shift_start_hour(shift_id: str) -> Optional[int]:
    m = SHIFT_ID_RE.match(shift_id)
    return int(m.group(2)) if m else None


def shift_day(shift_id: str) -> Optional[int]:
    m = SHIFT_ID_RE.match(shift_id)
    return int(m.group(1)) if m else None


def make_shift_id(day: int, start_hour: int) -> str:
    return "d%dh%02d" % (day, start_hour)


def is_night_shift(shift_id: str, rest: NightRestConfig = NightRestConfig()) -> bool:
    hour = shift_start_hour(shift_id)
    if hour is None:
        return False
    return hour >= rest.night_start_hour or hour < rest.night_end_hour


def week_index(day: int) -> int:
    return (day - WEEK_ANCHOR) // 7


# ---------------------------------------------------------------------------
# plan selection
# ---------------------------------------------------------------------------


def instance_for_plans(
    snapshot: Snapshot,
    plan_ids,
    pre_assignments=(),
    exclusions=(),
) -> RosterInstance:
    """Merge the selected meta-plans into one solvable instance."""
    shifts: dict[str, ShiftSpec] = {s.id: s for s in snapshot.instance.shifts}
    requirements = list(snapshot.instance.requirements)
    doubles = list(snapshot.instance.double_shift_links)
    for plan_id in plan_ids:
        plan = snapshot.meta_plan(plan_id)
        if plan is None:
            raise KeyError(plan_id)
        for s in plan.shifts:
            shifts[s.id] = s
        requirements.extend(plan.requirements)
        doubles.extend(plan.double_links)
    return merge_shift_sections(
        snapshot.instance,
        tuple(shifts.values()),
        requirements,
        doubles,
        pre_assignments,
        exclusions,
    )


# ---------------------------------------------------------------------------
# history accrual
# ---------------------------------------------------------------------------


def last_committed_day(snapshot: Snapshot) -> Optional[int]:
    return max((day for day, _ in snapshot.committed_plans), default=None)


def roll_forward(snapshot: Snapshot, day: int) -> Snapshot:
    """Counters as they stand on the morning of ``day``.

    Daily hours reset when the day is newer than the last committed one,
    weekly and overtime hours when the week is; rest absences for shifts
    already in the past are dropped.  With no committed plans the counters
    are taken at face value.
    """
    previous = last_committed_day(snapshot)
    if previous is None or day <= previous:
        return snapshot
    new_week = week_index(day) > week_index(previous)
    employees = []
    for e in snapshot.instance.employees:
        h = e.history
        employees.append(
            replace(
                e,
                absences=frozenset(
                    sh
                    for sh in e.absences
                    if shift_day(sh) is None or shift_day(sh) >= day
                ),
                history=HistoryRecord.make(
                    weekly=0 if new_week else h.weekly_hours,
                    daily=0,
                    overtime=0 if new_week else h.week_overtime_hours,
                    last_allocation=h.last_allocation_map(),
                ),
            )
        )
    return replace(
        snapshot, instance=replace(snapshot.instance, employees=tuple(employees))
    )


def apply_assignment_to_history(
    snapshot: Snapshot,
    day: int,
    assignment: Assignment,
    *,
    rest: NightRestConfig = NightRestConfig(),
) -> Snapshot:
    """Fold a committed plan into every employee's counters.

    Counters reset for all employees when the commit crosses a day or week
    boundary relative to the previous commit; hours above the regular weekly
    threshold accrue as overtime; heavy-skill work stamps the allocation
    date; night workers become absent from the follower shifts of the night
    shift.  Past rest absences (for shifts dated before the commit) are
    dropped.
    """
    instance = snapshot.instance
    previous = last_committed_day(snapshot)
    if previous is not None and day < previous:
        raise StoreError(
            "commit for day %s precedes last committed day %s"
            % (day_to_iso(day), day_to_iso(previous))
        )

    catalog = snapshot.shift_catalog()
    known = {e.id for e in instance.employees}
    for em, sh, _ in assignment.triples:
        if em not in known:
            raise StoreError("assignment references unknown employee %r" % em)
        if sh not in catalog:
            raise StoreError("assignment references unknown shift %r" % sh)

    heavy = instance.heavy_skills()
    threshold = instance.parameters.regular_week_hours
    # with no committed plans yet the seeded counters stand as-is
    new_day = previous is not None and day > previous
    new_week = previous is not None and week_index(day) > week_index(previous)

    followers: dict[str, list[str]] = {}
    for spec in catalog.values():
        if spec.predecessor is not None:
            followers.setdefault(spec.predecessor, []).append(spec.id)

    def rest_shifts(night_id: str) -> list[str]:
        blocked, frontier = [], [night_id]
        for _ in range(rest.rest_depth):
            frontier = [f for sh in frontier for f in sorted(followers.get(sh, []))]
            blocked.extend(frontier)
        return blocked

    employees = []
    for e in instance.employees:
        h = e.history
        daily = 0 if new_day else h.daily_hours
        weekly = 0 if new_week else h.weekly_hours
        overtime = 0 if new_week else h.week_overtime_hours

        worked = sorted({sh for em, sh, _ in assignment.triples if em == e.id})
        hours = sum(catalog[sh].duration for sh in worked)
        new_weekly = weekly + hours
        overtime += max(0, new_weekly - threshold) - max(0, weekly - threshold)
        if overtime > instance.parameters.week_overtime_max:
            raise StoreError(
                "employee %r would exceed the overtime cap (%d > %d)"
                % (e.id, overtime, instance.parameters.week_overtime_max)
            )

        last = e.history.last_allocation_map()
        for em, sh, sk in assignment.triples:
            if em == e.id and sk in heavy:
                last[sk] = day

        absences = {
            sh
            for sh in e.absences
            if shift_day(sh) is None or shift_day(sh) >= day
        }
        for sh in worked:
            if is_night_shift(sh, rest):
                absences.update(rest_shifts(sh))

        employees.append(
            replace(
                e,
                absences=frozenset(absences),
                history=HistoryRecord.make(
                    weekly=new_weekly,
                    daily=daily + hours,
                    overtime=overtime,
                    last_allocation=last,
                ),
            )
        )

    return replace(
        snapshot,
        instance=replace(instance, employees=tuple(employees)),
        committed_plans=snapshot.committed_plans + ((day, assignment),),
    )


# ---------------------------------------------------------------------------
# document round-trip
# ---------------------------------------------------------------------------


def meta_plan_to_document(plan: MetaPlan) -> dict:
    return {
        "id": plan.id,
        "name": plan.name,
        "date": day_to_iso(plan.day) if plan.day is not None else None,
        "shifts": [
            {"id": s.id, "duration": s.duration, "predecessor": s.predecessor}
            for s in plan.shifts
        ],
        "requirements": [
            {"shift": sh, "skill": sk, "count": n} for sh, sk, n in plan.requirements
        ],
        "doubleShifts": [{"small": a, "big": b} for a, b in plan.double_links],
    }


def _plan_section(doc: dict, key: str, keys: tuple, path: str) -> list[dict]:
    section = doc.get(key, [])
    if not isinstance(section, list):
        raise DocumentError("%s.%s" % (path, key), "expected a list")
    for i, entry in enumerate(section):
        if not isinstance(entry, dict) or any(k not in entry for k in keys):
            raise DocumentError(
                "%s.%s[%d]" % (path, key, i),
                "expected an object with %s" % ", ".join(keys),
            )
    return section


def meta_plan_from_document(doc: dict, path: str = "metaPlan") -> MetaPlan:
    if not isinstance(doc, dict) or "id" not in doc:
        raise DocumentError(path, "expected an object with an 'id'")
    shifts = tuple(
        ShiftSpec(
            id=s["id"], duration=s["duration"], predecessor=s.get("predecessor")
        )
        for s in _plan_section(doc, "shifts", ("id", "duration"), path)
    )
    requirements = tuple(
        (r["shift"], r["skill"], r["count"])
        for r in _plan_section(doc, "requirements", ("shift", "skill", "count"), path)
    )
    doubles = tuple(
        (d["small"], d["big"])
        for d in _plan_section(doc, "doubleShifts", ("small", "big"), path)
    )
    date = doc.get("date")
    return MetaPlan(
        id=doc["id"],
        name=doc.get("name", doc["id"]),
        day=iso_to_day(date, path + ".date") if date else None,
        shifts=shifts,
        requirements=requirements,
        double_links=doubles,
    )


def snapshot_to_document(snapshot: Snapshot) -> dict:
    return {
        "revision": snapshot.revision,
        "instance": instance_to_document(snapshot.instance),
        "metaPlans": [meta_plan_to_document(p) for p in snapshot.meta_plans],
        "committedPlans": [
            {"date": day_to_iso(day), "team": assignment_to_document(plan)}
            for day, plan in snapshot.committed_plans
        ],
    }


def snapshot_from_document(doc: dict) -> Snapshot:
    if not isinstance(doc, dict):
        raise DocumentError(".", "depot document must be an object")
    for key in ("instance", "metaPlans", "committedPlans"):
        if key not in doc:
            raise DocumentError(key, "missing key")
    committed = []
    for i, entry in enumerate(doc["committedPlans"]):
        path = "committedPlans[%d]" % i
        if not isinstance(entry, dict) or "date" not in entry or "team" not in entry:
            raise DocumentError(path, "expected {date, team}")
        committed.append(
            (
                iso_to_day(entry["date"], path + ".date"),
                assignment_from_document(entry["team"], path + ".team"),
            )
        )
    return Snapshot(
        instance=instance_from_document(doc["instance"], "instance"),
        meta_plans=tuple(
            meta_plan_from_document(p, "metaPlans[%d]" % i)
            for i, p in enumerate(doc["metaPlans"])
        ),
        committed_plans=tuple(committed),
        revision=doc.get("revision", 0),
    )


# ---------------------------------------------------------------------------
# file storage
# ---------------------------------------------------------------------------


def _lock_for(location: str) -> FileLock:
    return FileLock(str(location) + ".lock")


def load_snapshot(location) -> Snapshot:
    location = str(location)
    if not os.path.exists(location):
        raise MissingDepotError("no depot at %s" % location)
    with open(location, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(".", "not valid JSON: %s" % exc)
    return snapshot_from_document(doc)


def save_snapshot(snapshot: Snapshot, location) -> Snapshot:
    """Write atomically; fail on revision mismatch; return the bumped snapshot."""
    location = str(location)
    with _lock_for(location):
        if os.path.exists(location):
            current = load_snapshot(location)
            if current.revision != snapshot.revision:
                raise RevisionConflictError(
                    "depot is at revision %d, snapshot at %d"
                    % (current.revision, snapshot.revision)
                )
        bumped = replace(snapshot, revision=snapshot.revision + 1)
        directory = os.path.dirname(location) or "."
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(snapshot_to_document(bumped), fh, indent=2, sort_keys=True)
            os.replace(tmp, location)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    return bumped


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------


def statistics_rows(snapshot: Snapshot) -> list[dict]:
    heavy = snapshot.instance.heavy_skills()
    rows = []
    for e in sorted(snapshot.instance.employees, key=lambda e: e.id):
        last = e.history.last_allocation_map()
        heavy_days = [day for sk, day in last.items() if sk in heavy]
        rows.append(
            {
                "employee": e.id,
                "weeklyHours": e.history.weekly_hours,
                "dailyHours": e.history.daily_hours,
                "overtimeHours": e.history.week_overtime_hours,
                "lastHeavyAllocation": day_to_iso(max(heavy_days)) if heavy_days else "",
            }
        )
    return rows


def export_statistics_csv(snapshot: Snapshot) -> str:
    rows = statistics_rows(snapshot)
    out = io.StringIO()
    writer = csv.DictWriter(
        out,
        fieldnames=[
            "employee",
            "weeklyHours",
            "dailyHours",
            "overtimeHours",
            "lastHeavyAllocation",
        ],
        lineterminator="\n",
    )
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue()
