"""Current budgeting for the servo and logic rails.

The servo rail must carry worst-case (stall) currents; the six servos
together draw more than the supply provides, which is why motion is
sequenced one servo at a time. The logic rail carries the servo signal
lines plus the IR sensor's power and signal draw. All arithmetic is in
integer mA so totals are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from armforge.model import ArmModel

# IR sensor draw on the logic rail (mA).
SENSOR_POWER_MA = 30
SENSOR_COMM_MA = 40


@dataclass(frozen=True)
class BudgetReport:
    total_stall: int
    servo_supply_limit: int
    simultaneous_feasible: bool
    worst_single_servo: int
    logic_total: int
    logic_limit: int
    logic_feasible: bool


class MotionInterval(NamedTuple):
    servo_index: int
    start_time: float
    end_time: float


def stall_budget(m: ArmModel) -> BudgetReport:
    """Worst-case rail budget for the configured supplies."""
    total_stall = sum(s.stall_current for s in m.servos)
    logic_total = sum(s.comm_current for s in m.servos) + SENSOR_POWER_MA + SENSOR_COMM_MA
    servo_limit = m.supply.servo_supply.max_current
    logic_limit = m.supply.logic_supply.max_current
    return BudgetReport(
        total_stall=total_stall,
        servo_supply_limit=servo_limit,
        simultaneous_feasible=total_stall <= servo_limit,
        worst_single_servo=max(s.stall_current for s in m.servos),
        logic_total=logic_total,
        logic_limit=logic_limit,
        logic_feasible=logic_total <= logic_limit,
    )


def validate_motion_plan(
    plan: Iterable[tuple[int, float, float] | MotionInterval],
) -> list[tuple[MotionInterval, MotionInterval]]:
    """Check the one-servo-at-a-time rule over a set of move intervals.

    Intervals are closed-open, so back-to-back moves sharing an endpoint
    are fine. Returns the overlapping pairs; an empty list means the plan
    is valid. Raises ValueError for malformed intervals (start >= end).
    The verdict is independent of the order the plan lists its moves.
    """
    intervals = []
    for item in plan:
        iv = MotionInterval(*item)
        if not iv.start_time < iv.end_time:
            raise ValueError(
                f"malformed interval for servo {iv.servo_index}: "
                f"start {iv.start_time} must be < end {iv.end_time}"
            )
        intervals.append(iv)
    intervals.sort(key=lambda iv: (iv.start_time, iv.end_time, iv.servo_index))
    violations = []
    for i, first in enumerate(intervals):
        for second in intervals[i + 1 :]:
            if second.start_time >= first.end_time:
                break  # sorted by start: nothing later can reach back
            violations.append((first, second))
    return violations
