import dataclasses
import json

import pytest

from armforge.model import (
    ConfigError,
    load_arm_config,
    model_to_dict,
    serialize_model,
    validate_model,
)


def test_default_model_is_valid(model):
    assert validate_model(model) == []


def test_default_constants(model):
    # Mass chain is grip-outward; the last entry carries the shoulder servo
    # plus its bracket.
    assert model.mass_chain[4].actuator_A == 215.0
    assert model.servos[5].rated_torque == 24.7
    assert [l.length_L for l in model.mass_chain] == [2.8, 2.8, 2.85, 18.73, 14.6]
    assert [l.weight_W for l in model.mass_chain] == [15.7, 10.0, 9.0, 24.0, 31.0]
    assert [s.rated_torque for s in model.servos[1:]] == [4.1, 4.8, 9.6, 13.2, 24.7]
    assert [s.stall_current for s in model.servos] == [180, 180, 340, 450, 285, 830]
    assert model.supply.servo_supply.max_current == 2250
    assert model.supply.logic_supply.max_current == 1500


def test_reach(model):
    assert model.reach == pytest.approx(41.78)
    assert model.a3 == 14.6
    assert model.a4 == 18.73
    assert model.d5 == pytest.approx(8.45)
    assert model.d1 == 7.0


def test_serialize_round_trip(model):
    assert load_arm_config(serialize_model(model)) == model


def test_round_trip_preserves_overrides(model):
    doc = model_to_dict(model)
    doc["dh_table"][0]["d"] = 9.25
    doc["sensor"]["noise_sigma"] = 0.125
    m = load_arm_config(json.dumps(doc))
    assert load_arm_config(serialize_model(m)) == m


def test_full_default_document_equals_default(model):
    assert load_arm_config(json.dumps(model_to_dict(model))) == model


def test_empty_document_takes_defaults(model):
    assert load_arm_config("{}") == model


def test_override_d1_only(model):
    doc = {"dh_table": [{"d": 10.0}, {}, {}, {}, {}]}
    m = load_arm_config(json.dumps(doc))
    assert m.d1 == 10.0
    assert m.a3 == model.a3
    assert m.mass_chain == model.mass_chain
    assert m.servos == model.servos


def test_four_dh_rows_rejected():
    doc = {"dh_table": [{}, {}, {}, {}]}
    with pytest.raises(ConfigError, match="dh_table must have 5 rows"):
        load_arm_config(json.dumps(doc))


def test_parse_error_reports_line():
    with pytest.raises(ConfigError, match=r"line 2"):
        load_arm_config('{\n  "dh_table": oops\n}')


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown config key"):
        load_arm_config('{"nonsense": 1}')


def test_negative_rated_torque_violation(model):
    bad_servo = dataclasses.replace(model.servos[0], rated_torque=-1.0)
    m = dataclasses.replace(model, servos=(bad_servo,) + model.servos[1:])
    violations = validate_model(m)
    assert "servos[0].rated_torque must be > 0" in violations


def test_bad_joint_limits_violations(model):
    m = dataclasses.replace(model, joint_limits=((200.0, 10.0),) + model.joint_limits[1:])
    violations = validate_model(m)
    assert any("joint_limits[0] must be ordered" in v for v in violations)
    assert any("joint_limits[0] must lie within" in v for v in violations)


def test_duplicate_joint_index_violation(model):
    rows = list(model.dh_table)
    rows[1] = dataclasses.replace(rows[1], joint_index=1)
    m = dataclasses.replace(model, dh_table=tuple(rows))
    assert any("joint_index 1 is duplicated" in v for v in validate_model(m))


def test_validation_error_from_config():
    doc = {"servos": [{"rated_torque": -5}, {}, {}, {}, {}, {}]}
    with pytest.raises(ConfigError, match=r"servos\[0\].rated_torque must be > 0"):
        load_arm_config(json.dumps(doc))


def test_model_is_immutable(model):
    with pytest.raises(dataclasses.FrozenInstanceError):
        model.dh_table = ()
