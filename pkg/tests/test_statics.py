import dataclasses

import pytest
from hypothesis import given, strategies as st

from armforge.model import default_arm_model
from armforge.statics import (
    REFERENCE_ZERO_LOAD_TORQUES,
    joint_torques,
    max_payload,
    torque_load_increment,
)

# Reference-design torque tables (kg*cm) at 0 / 100 / 300 gf, grip-most
# equation first.
REF_AT_0 = (0.021, 0.207, 0.511, 5.122, 12.25)
REF_AT_100 = (0.3, 0.767, 1.356, 7.84, 16.43)
REF_AT_300 = (0.86, 1.887, 3.04, 13.27, 24.79)


def test_zero_load_distal_equations(model):
    report = joint_torques(model, 0.0)
    # Grip-most pivot: 0.5 * 2.8 * 15.7 = 21.98 gf*cm.
    assert report.torques[0] == pytest.approx(0.02198, abs=1e-9)
    assert report.torques[0] == pytest.approx(REF_AT_0[0], abs=0.005)
    assert report.torques[1] == pytest.approx(REF_AT_0[1], abs=0.01)
    assert report.torques[2] == pytest.approx(REF_AT_0[2], abs=0.01)
    # Hand-summed cross-check of the third equation: 511.435 gf*cm.
    assert report.torques[2] == pytest.approx(0.511435, abs=1e-9)


def test_known_loaded_values(model):
    at100 = joint_torques(model, 100.0)
    assert at100.torques[1] == pytest.approx(0.767, abs=0.01)
    assert at100.torques[2] == pytest.approx(1.356, abs=0.01)
    at300 = joint_torques(model, 300.0)
    assert at300.torques[0] == pytest.approx(0.86, abs=0.01)


def test_proximal_intercepts_documented(model):
    # The stated proximal equations evaluate to 5.242 and 8.888 kg*cm,
    # not the reference 5.122 / 12.25; the report must flag this.
    report = joint_torques(model, 0.0)
    assert report.torques[3] == pytest.approx(5.2425, abs=0.001)
    assert report.torques[4] == pytest.approx(8.8881, abs=0.001)
    assert len(report.notes) == 2
    assert any("12.250" in n and "8.888" in n for n in report.notes)


def test_feasibility_flag(model):
    assert joint_torques(model, 0.0).feasible
    assert joint_torques(model, 292.0).feasible
    # The stated elbow equation crosses its rating just short of 300 gf.
    assert not joint_torques(model, 293.0).feasible
    assert not joint_torques(model, 400.0).feasible


def test_negative_load_rejected(model):
    with pytest.raises(ValueError):
        joint_torques(model, -1.0)


def test_load_increments(model):
    expected = (0.28, 0.56, 0.845, 2.718, 4.178)
    for k, want in enumerate(expected, start=1):
        assert torque_load_increment(model, k) == pytest.approx(want, abs=1e-9)


def test_increments_match_reference_differences(model):
    for k in range(1, 6):
        ref_diff = REF_AT_100[k - 1] - REF_AT_0[k - 1]
        assert torque_load_increment(model, k) == pytest.approx(ref_diff, abs=0.01)


def test_increment_index_range(model):
    with pytest.raises(ValueError):
        torque_load_increment(model, 0)
    with pytest.raises(ValueError):
        torque_load_increment(model, 6)


@given(load=st.floats(min_value=0.0, max_value=2000.0, allow_nan=False))
def test_torque_affine_in_load(load):
    model = default_arm_model()
    loaded = joint_torques(model, load)
    unloaded = joint_torques(model, 0.0)
    for k in range(1, 6):
        grown = loaded.torques[k - 1] - unloaded.torques[k - 1]
        assert grown == pytest.approx(load / 100.0 * torque_load_increment(model, k), abs=1e-9)


def test_torques_monotone_in_parameters(model):
    base = joint_torques(model, 50.0).torques

    heavier = dataclasses.replace(
        model,
        mass_chain=(dataclasses.replace(model.mass_chain[0], weight_W=99.0),) + model.mass_chain[1:],
    )
    assert all(b >= a - 1e-12 for a, b in zip(base, joint_torques(heavier, 50.0).torques))

    longer = dataclasses.replace(
        model,
        mass_chain=(dataclasses.replace(model.mass_chain[0], length_L=5.0),) + model.mass_chain[1:],
    )
    assert all(b >= a - 1e-12 for a, b in zip(base, joint_torques(longer, 50.0).torques))

    assert all(b >= a - 1e-12 for a, b in zip(base, joint_torques(model, 80.0).torques))


def test_feasible_monotone_in_load(model):
    loads = [0, 50, 100, 150, 200, 250, 292, 293, 350, 400]
    flags = [joint_torques(model, load).feasible for load in loads]
    # Once infeasible, stays infeasible.
    assert flags == sorted(flags, reverse=True)


def test_max_payload_with_reference_offsets(model):
    payload = max_payload(model, zero_load_overrides=REFERENCE_ZERO_LOAD_TORQUES)
    assert payload == pytest.approx(298.0, abs=5.0)
    # Closed-form check: the shoulder binds at (24.7 - 12.25) / 4.178 * 100,
    # the elbow a hair earlier at (13.2 - 5.122) / 2.718 * 100.
    assert payload == pytest.approx(297.2, abs=0.1)


def test_max_payload_pure_equations(model):
    # With the stated equations the elbow servo binds first:
    # (13.2 - 5.2425) / 2.718 * 100 = 292.8 gf.
    payload = max_payload(model)
    assert payload == pytest.approx(292.77, abs=0.1)


def test_max_payload_matches_linear_scan(model):
    for overrides in (None, REFERENCE_ZERO_LOAD_TORQUES):
        solved = max_payload(model, zero_load_overrides=overrides)
        zero = joint_torques(model, 0.0).torques
        intercepts = overrides if overrides is not None else zero
        rated = [s.rated_torque for s in model.servos[1:]]

        def feasible(load):
            return all(
                i + load / 100.0 * torque_load_increment(model, k) <= r
                for k, (i, r) in enumerate(zip(intercepts, rated), start=1)
            )

        scan = 0
        while feasible(scan + 1):
            scan += 1
        assert int(solved) == scan


def test_max_payload_zero_when_infeasible(model):
    weak = dataclasses.replace(
        model,
        servos=tuple(dataclasses.replace(s, rated_torque=1e-9) for s in model.servos),
    )
    assert max_payload(weak) == 0.0


def test_max_payload_override_arity(model):
    with pytest.raises(ValueError):
        max_payload(model, zero_load_overrides=(1.0, 2.0))
