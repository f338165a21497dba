"""Static holding-torque analysis and payload solver.

Worst case only: the arm fully extended and horizontal, every link
weight acting at half its length and every actuator weight at its link's
outboard end. Torques are mass * lever products in gf*cm reported as
kg*cm, so the gravitational constant cancels throughout.

The five equations are implemented exactly as the reference design
states them, including the (L4+L5) lever on the A4 actuator term of the
second-from-base equation, which is likely a transcription slip for L4
alone. Keeping the stated form is deliberate: the load increments, which
are what the design's 0 g / 100 g torque tables actually pin down, are
unaffected, and the known intercept deviations are surfaced in the
report instead of silently corrected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from armforge.model import ArmModel

# Reference-design zero-load torques (kg*cm), grip-most equation first.
# The two proximal values exceed what the stated equations evaluate to
# (5.242 and 8.888); the load increments match exactly, so the deviation
# is a constant intercept the reference material does not explain.
REFERENCE_ZERO_LOAD_TORQUES = (0.021, 0.207, 0.511, 5.122, 12.25)

# Intercepts are flagged when computed and reference zero-load values
# disagree by more than this (kg*cm).
_INTERCEPT_FLAG_TOL = 0.01


@dataclass(frozen=True)
class TorqueReport:
    """Required torques at a given load, grip-most pivot first.

    torques[k] is the torque at pivot k+1 counting from the grip; the
    margin pairs it with the rated torque of the matching servo
    (servos[1..5] of the model). notes flags intercepts that disagree
    with the reference zero-load table.
    """

    load_A1: float
    torques: tuple[float, float, float, float, float]
    margins: tuple[float, float, float, float, float]
    feasible: bool
    notes: tuple[str, ...] = ()


def _equation_torques_gfcm(m: ArmModel, load: float) -> list[float]:
    """The five stated equations, verbatim, in gf*cm."""
    L1, L2, L3, L4, L5 = (link.length_L for link in m.mass_chain)
    W1, W2, W3, W4, W5 = (link.weight_W for link in m.mass_chain)
    A2, A3, A4, A5, A6 = (link.actuator_A for link in m.mass_chain)
    A1 = load

    t_grip = L1 * A1 + 0.5 * L1 * W1
    t_wrist_roll = (L1 + L2) * A1 + (0.5 * L1 + L2) * W1 + L2 * A2 + 0.5 * L2 * W2
    t_wrist = (
        (L1 + L2 + L3) * A1
        + (0.5 * L1 + L2 + L3) * W1
        + (L2 + L3) * A2
        + (0.5 * L2 + L3) * W2
        + L3 * A3
        + 0.5 * L3 * W3
    )
    # The (L4+L5) levers on the last two terms follow the stated equation
    # verbatim; see the module docstring.
    t_elbow = (
        (L1 + L2 + L3 + L4) * A1
        + (0.5 * L1 + L2 + L3 + L4) * W1
        + (L2 + L3 + L4) * A2
        + (0.5 * L2 + L3 + L4) * W2
        + (L3 + L4) * A3
        + (0.5 * L3 + L4) * W3
        + (L4 + L5) * A4
        + (0.5 * L4 + L5) * W4
    )
    t_shoulder = (
        (L1 + L2 + L3 + L4 + L5) * A1
        + (0.5 * L1 + L2 + L3 + L4 + L5) * W1
        + (L2 + L3 + L4 + L5) * A2
        + (0.5 * L2 + L3 + L4 + L5) * W2
        + (L3 + L4 + L5) * A3
        + (0.5 * L3 + L4 + L5) * W3
        + (L4 + L5) * A4
        + (0.5 * L4 + L5) * W4
        + L5 * A5
        + 0.5 * L5 * W5
    )
    return [t_grip, t_wrist_roll, t_wrist, t_elbow, t_shoulder]


def _rated_torques(m: ArmModel) -> list[float]:
    # servos[0] is the gripper/base servo; 1..5 pair with the equations.
    return [s.rated_torque for s in m.servos[1:6]]


def joint_torques(m: ArmModel, load_A1: float) -> TorqueReport:
    """Required torque at each pivot for a grip load of load_A1 (gf)."""
    if load_A1 < 0:
        raise ValueError(f"load must be >= 0, got {load_A1}")
    torques = tuple(t / 1000.0 for t in _equation_torques_gfcm(m, load_A1))
    rated = _rated_torques(m)
    margins = tuple(r - t for r, t in zip(rated, torques))
    zero = [t / 1000.0 for t in _equation_torques_gfcm(m, 0.0)]
    notes = []
    for k, (computed, reference) in enumerate(zip(zero, REFERENCE_ZERO_LOAD_TORQUES), start=1):
        if abs(computed - reference) > _INTERCEPT_FLAG_TOL:
            notes.append(
                f"equation {k}: computed zero-load torque {computed:.3f} kg*cm "
                f"differs from the reference value {reference:.3f} kg*cm "
                f"(constant intercept offset {reference - computed:+.3f}); "
                "load increments agree"
            )
    return TorqueReport(
        load_A1=load_A1,
        torques=torques,
        margins=margins,
        feasible=all(margin >= 0 for margin in margins),
        notes=tuple(notes),
    )


def torque_load_increment(m: ArmModel, k: int) -> float:
    """Torque growth per 100 gf of load for equation k (1 = grip-most).

    Equals 0.1 times the sum of link lengths multiplying the load in
    that equation, in kg*cm per 100 gf.
    """
    if not 1 <= k <= 5:
        raise ValueError(f"equation index must be in 1..5, got {k}")
    lever = sum(link.length_L for link in m.mass_chain[:k])
    return 100.0 * lever / 1000.0


def max_payload(
    m: ArmModel, zero_load_overrides: Optional[Sequence[float]] = None
) -> float:
    """Largest grip load (gf) with every required torque within rating.

    Every torque is affine in the load, so feasibility is monotone and
    bisection converges exactly up to tolerance. zero_load_overrides
    replaces the computed zero-load intercepts (e.g. with the reference
    table) before solving. Returns 0 if infeasible even unloaded.
    """
    if zero_load_overrides is not None:
        intercepts = [float(v) for v in zero_load_overrides]
        if len(intercepts) != 5:
            raise ValueError("zero_load_overrides must supply 5 values")
    else:
        intercepts = [t / 1000.0 for t in _equation_torques_gfcm(m, 0.0)]
    slopes = [torque_load_increment(m, k) / 100.0 for k in range(1, 6)]  # kg*cm per gf
    rated = _rated_torques(m)

    def feasible(load: float) -> bool:
        return all(i + s * load <= r for i, s, r in zip(intercepts, slopes, rated))

    if not feasible(0.0):
        return 0.0
    lo, hi = 0.0, 100.0
    while feasible(hi):
        hi *= 2.0
        if hi > 1e9:
            return hi  # nothing binds; unbounded in this model
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo
