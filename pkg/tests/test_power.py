import dataclasses

import pytest
from hypothesis import given, strategies as st

from armforge.power import MotionInterval, stall_budget, validate_motion_plan


def test_stall_budget_reference_numbers(model):
    report = stall_budget(model)
    assert report.total_stall == 2265
    assert report.servo_supply_limit == 2250
    assert not report.simultaneous_feasible
    assert report.worst_single_servo == 830
    assert report.logic_total == 310
    assert report.logic_limit == 1500
    assert report.logic_feasible


def test_budget_totals_are_exact_integers(model):
    report = stall_budget(model)
    assert isinstance(report.total_stall, int)
    assert isinstance(report.logic_total, int)
    assert report.total_stall == sum(s.stall_current for s in model.servos)


def test_one_servo_removed_becomes_feasible(model):
    # Dropping one 180 mA servo brings the rail under its limit.
    slim = dataclasses.replace(model, servos=model.servos[1:])
    report = stall_budget(slim)
    assert report.total_stall == 2085
    assert report.simultaneous_feasible


def test_plan_back_to_back_ok():
    assert validate_motion_plan([(1, 0.0, 1.0), (2, 1.0, 2.0)]) == []


def test_plan_overlap_reported():
    violations = validate_motion_plan([(1, 0.0, 2.0), (2, 1.0, 3.0)])
    assert violations == [(MotionInterval(1, 0.0, 2.0), MotionInterval(2, 1.0, 3.0))]


def test_plan_containment_reported():
    violations = validate_motion_plan([(1, 0.0, 10.0), (2, 1.0, 2.0), (3, 3.0, 4.0)])
    pairs = {(a.servo_index, b.servo_index) for a, b in violations}
    assert pairs == {(1, 2), (1, 3)}


def test_empty_plan_ok():
    assert validate_motion_plan([]) == []


def test_malformed_interval_raises():
    with pytest.raises(ValueError, match="malformed interval"):
        validate_motion_plan([(1, 2.0, 2.0)])
    with pytest.raises(ValueError, match="malformed interval"):
        validate_motion_plan([(1, 3.0, 1.0)])


@st.composite
def plans(draw):
    n = draw(st.integers(min_value=0, max_value=8))
    plan = []
    for _ in range(n):
        start = draw(st.floats(min_value=0, max_value=50, allow_nan=False))
        length = draw(st.floats(min_value=0.01, max_value=10, allow_nan=False))
        servo = draw(st.integers(min_value=1, max_value=6))
        plan.append((servo, start, start + length))
    return plan


@given(plan=plans(), seed=st.randoms())
def test_plan_verdict_order_insensitive(plan, seed):
    verdict = validate_motion_plan(plan) == []
    shuffled = list(plan)
    seed.shuffle(shuffled)
    assert (validate_motion_plan(shuffled) == []) == verdict


@given(plan=plans())
def test_accepted_plan_single_servo_demand(plan, model):
    if validate_motion_plan(plan):
        return
    # A valid plan never has two servos drawing at once, so instantaneous
    # rail demand is bounded by the single worst stall current.
    worst = stall_budget(model).worst_single_servo
    probes = sorted({iv[1] for iv in plan} | {(iv[1] + iv[2]) / 2 for iv in plan})
    for t in probes:
        active = [iv for iv in plan if iv[1] <= t < iv[2]]
        assert len(active) <= 1
        demand = worst * len(active)
        assert demand <= worst <= model.supply.servo_supply.max_current