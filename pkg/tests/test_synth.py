"""The bundled fixtures and generators stay structurally valid."""

import pytest

from portroster.model import ERROR, validate_instance
from portroster.store import instance_for_plans, shift_day
from portroster.synth import (
    BASE_MONDAY,
    conflict_instance,
    day_meta_plan,
    double_shift_instance,
    generate_day_plan,
    large_instance,
    random_instance,
    synthetic_depot,
    two_role_instance,
)


@pytest.mark.parametrize(
    "factory",
    [two_role_instance, conflict_instance, double_shift_instance, large_instance],
)
def test_bundled_fixtures_validate(factory):
    issues = [i for i in validate_instance(factory()) if i.severity == ERROR]
    assert issues == []


def test_large_instance_size():
    inst = large_instance()
    assert len(inst.employees) == 130
    assert len(inst.shifts) == 1
    assert inst.required_total(inst.shifts[0].id) == 65


def test_conflict_fixture_sets_up_the_preference_clash():
    inst = conflict_instance()
    e1, e2 = inst.employee("e1"), inst.employee("e2")
    assert e1.history.weekly_hours + inst.parameters.fair_gap < e2.history.weekly_hours
    s1_dates = (
        e1.history.last_allocation_map()["s1"],
        e2.history.last_allocation_map()["s1"],
    )
    assert s1_dates[0] < s1_dates[1]


@pytest.mark.parametrize("seed", range(40))
def test_random_instances_validate(seed):
    issues = [
        i for i in validate_instance(random_instance(seed)) if i.severity == ERROR
    ]
    assert issues == []


def test_random_instances_differ_and_repeat():
    assert random_instance(3) == random_instance(3)
    assert any(random_instance(0) != random_instance(k) for k in range(1, 5))


def test_depot_plans_cover_the_window_and_chain_nights():
    depot = synthetic_depot(days=3)
    assert len(depot.meta_plans) == 3
    for k, plan in enumerate(depot.meta_plans):
        assert plan.day == BASE_MONDAY + k
        assert all(shift_day(s.id) == plan.day for s in plan.shifts)
    # each morning follows the previous night
    for prev, plan in zip(depot.meta_plans, depot.meta_plans[1:]):
        assert plan.shifts[0].predecessor == prev.shifts[-1].id


def test_depot_days_merge_into_valid_instances():
    depot = synthetic_depot(days=2)
    for plan in depot.meta_plans:
        merged = instance_for_plans(depot, [plan.id])
        assert [i for i in validate_instance(merged) if i.severity == ERROR] == []


def test_day_meta_plan_keeps_heavy_demand_in_one_shift():
    plan = day_meta_plan(BASE_MONDAY)
    heavy_shifts = {sh for sh, sk, _ in plan.requirements if sk == "crane"}
    assert len(heavy_shifts) == 1


def test_generated_plans_are_seed_deterministic():
    a = generate_day_plan(BASE_MONDAY, 7)
    b = generate_day_plan(BASE_MONDAY, 7)
    c = generate_day_plan(BASE_MONDAY, 8)
    assert a == b
    assert a != c
