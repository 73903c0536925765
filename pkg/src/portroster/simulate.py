"""Multi-day what-if runs: solve each day, fold history, carry on.

The window iterates chronologically over a scratch copy of the snapshot so
the depot is untouched unless the caller commits the result.  Days whose
solve fails are recorded and skipped — the window never aborts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .engine import (
    DEGRADED,
    FEASIBLE,
    SolveLimits,
    SolveOutcome,
    solve,
)
from .model import day_to_iso
from .store import (
    NightRestConfig,
    Snapshot,
    apply_assignment_to_history,
    instance_for_plans,
    last_committed_day,
    roll_forward,
    week_index,
)
from .synth import generate_day_plan

NO_PLAN = "no-plan"


@dataclass(frozen=True)
class DayResult:
    day: int
    plan_ids: tuple[str, ...]
    outcome: Optional[SolveOutcome]  # None when no plan covered the day
    overtime_accrued: int = 0

    @property
    def status(self) -> str:
        return self.outcome.status if self.outcome else NO_PLAN


@dataclass(frozen=True)
class SimulationResult:
    days: tuple[DayResult, ...]
    snapshot: Snapshot  # scratch snapshot after all commits

    def total_overtime(self) -> int:
        return sum(d.overtime_accrued for d in self.days)

    def degraded_days(self) -> int:
        return sum(1 for d in self.days if d.status == DEGRADED)

    def infeasible_days(self) -> int:
        return sum(1 for d in self.days if d.outcome and d.status not in (FEASIBLE, DEGRADED))

    def aggregate_stats(self) -> dict:
        weekly = {
            e.id: e.history.weekly_hours for e in self.snapshot.instance.employees
        }
        return {
            "totalOvertimeHours": self.total_overtime(),
            "degradedDays": self.degraded_days(),
            "infeasibleDays": self.infeasible_days(),
            "maxWeeklyHours": max(weekly.values(), default=0),
            "minWeeklyHours": min(weekly.values(), default=0),
            "weeklyHours": weekly,
        }


def _overtime_accrued(before: Snapshot, after: Snapshot, day: int) -> int:
    """Overtime added by this commit (week resets zero the baseline)."""
    previous = last_committed_day(before)
    fresh_week = previous is None or week_index(day) > week_index(previous)
    baseline = {
        e.id: 0 if fresh_week else e.history.week_overtime_hours
        for e in before.instance.employees
    }
    return sum(
        e.history.week_overtime_hours - baseline[e.id]
        for e in after.instance.employees
    )


def simulate_window(
    snapshot: Snapshot,
    start_day: int,
    days: int,
    *,
    generator_seed: Optional[int] = None,
    rest: NightRestConfig = NightRestConfig(),
    limits: SolveLimits = SolveLimits(),
) -> SimulationResult:
    scratch = snapshot
    results: list[DayResult] = []
    for k in range(days):
        day = start_day + k
        scratch = roll_forward(scratch, day)
        plans = scratch.plans_for_day(day)
        if not plans and generator_seed is not None:
            plan = generate_day_plan(day, generator_seed)
            scratch = Snapshot(
                instance=scratch.instance,
                meta_plans=scratch.meta_plans + (plan,),
                committed_plans=scratch.committed_plans,
                revision=scratch.revision,
            )
            plans = (plan,)
        if not plans:
            results.append(DayResult(day, (), None))
            continue
        plan_ids = tuple(p.id for p in plans)
        instance = instance_for_plans(scratch, plan_ids)
        outcome = solve(instance, limits=limits)
        accrued = 0
        if outcome.assignment is not None and outcome.status in (FEASIBLE, DEGRADED):
            committed = apply_assignment_to_history(
                scratch, day, outcome.assignment, rest=rest
            )
            accrued = _overtime_accrued(scratch, committed, day)
            scratch = committed
        results.append(DayResult(day, plan_ids, outcome, accrued))
    return SimulationResult(tuple(results), scratch)


def day_result_to_document(result: DayResult) -> dict:
    doc = {
        "date": day_to_iso(result.day),
        "planIds": list(result.plan_ids),
        "status": result.status,
        "overtimeAccrued": result.overtime_accrued,
    }
    if result.outcome and result.outcome.assignment is not None:
        doc["triples"] = [list(t) for t in result.outcome.assignment.triples]
        doc["waivedPreferences"] = [
            v.message() for v in result.outcome.waived_preferences
        ]
    return doc
