"""Arm description data model, reference-design defaults and config I/O.

All quantities use the units the reference design is specified in:
centimeters, gram-force, kg*cm for torque, mA for current, degrees for
angles. Conversions happen only at display time.

Models are immutable after construction and safe to share across
concurrent readers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

from armforge.sensor import SensorModelParams


class ConfigError(ValueError):
    """Raised when a config document cannot be parsed or validated."""


@dataclass(frozen=True)
class DHRow:
    """One Denavit-Hartenberg table row: a (cm), alpha (deg), d (cm),
    theta_offset (deg, added to the commanded joint angle), joint_index 1..5.
    """

    a: float
    alpha: float
    d: float
    theta_offset: float
    joint_index: int


@dataclass(frozen=True)
class LinkMass:
    """Mass-chain entry, grip-outward order: link length (cm), link weight
    (gf, centered at half length) and the actuator weight (gf) hanging at
    the link's outboard end.
    """

    name: str
    length_L: float
    weight_W: float
    actuator_A: float


@dataclass(frozen=True)
class ServoSpec:
    model_name: str
    rated_torque: float  # kg*cm
    stall_current: int  # mA, worst-case draw
    comm_current: int  # mA, signal-line draw
    slew_rate: float = 250.0  # deg/s
    angle_range: tuple[float, float] = (0.0, 180.0)


@dataclass(frozen=True)
class RailRating:
    volts: float
    max_current: int  # mA


@dataclass(frozen=True)
class SupplyRatings:
    servo_supply: RailRating
    logic_supply: RailRating


@dataclass(frozen=True)
class ArmModel:
    """Full arm description: D-H rows, mass chain, servo specs, sensor
    constants, supply ratings and per-joint limits.

    The servo list holds six entries: index 0 is the gripper/base servo,
    indices 1..5 pair with the static torque equations from the grip-most
    pivot outward to the shoulder.
    """

    dh_table: tuple[DHRow, ...]
    mass_chain: tuple[LinkMass, ...]
    servos: tuple[ServoSpec, ...]
    sensor: SensorModelParams
    supply: SupplyRatings
    joint_limits: tuple[tuple[float, float], ...]

    # Geometry accessors named after the conventional arm parameters:
    # base height d1, shoulder-elbow length a3, elbow-wrist length a4,
    # wrist-to-grip-tip offset d5.
    @property
    def d1(self) -> float:
        return self.dh_table[0].d

    @property
    def a3(self) -> float:
        return self.dh_table[1].a

    @property
    def a4(self) -> float:
        return self.dh_table[2].a

    @property
    def d5(self) -> float:
        return self.dh_table[4].d

    @property
    def reach(self) -> float:
        """Grip-tip reach from the shoulder with the chain fully extended."""
        return self.a3 + self.a4 + self.d5


def default_arm_model() -> ArmModel:
    """The reference-design arm.

    Geometry: a3=14.6, a4=18.73, d5=8.45 cm (the wrist-to-tip offset is
    the grip + sensor-bracket + wrist-bracket stack, 2.8+2.8+2.85). The
    base height d1=7.0 cm is a design default; every checkable quantity
    (torques, reach) is independent of it. The D-H table uses the
    Rot_z * Trans_z * Trans_x * Rot_x convention, so the +90/-90 twists
    sit on rows 1 and 4 where they take effect before the next joint.
    """
    dh_table = (
        DHRow(a=0.0, alpha=90.0, d=7.0, theta_offset=0.0, joint_index=1),
        DHRow(a=14.6, alpha=0.0, d=0.0, theta_offset=0.0, joint_index=2),
        DHRow(a=18.73, alpha=0.0, d=0.0, theta_offset=0.0, joint_index=3),
        DHRow(a=0.0, alpha=-90.0, d=0.0, theta_offset=90.0, joint_index=4),
        DHRow(a=0.0, alpha=0.0, d=8.45, theta_offset=0.0, joint_index=5),
    )
    mass_chain = (
        LinkMass("grip", 2.8, 15.7, 45.5),
        LinkMass("sensor-bracket", 2.8, 10.0, 31.0),
        LinkMass("wrist-bracket", 2.85, 9.0, 62.2),
        LinkMass("forearm", 18.73, 24.0, 123.0),
        LinkMass("upper-arm", 14.6, 31.0, 215.0),
    )
    # Index 0 is the gripper/base servo; its rated torque is a datasheet
    # figure, not a design-checked value. Indices 1..5 pair with the
    # torque equations from the grip-most pivot outward.
    servos = (
        ServoSpec("HS-485HB", 6.0, 180, 40),
        ServoSpec("HS-422", 4.1, 180, 40),
        ServoSpec("HS-225MG", 4.8, 340, 40),
        ServoSpec("HS-645MG", 9.6, 450, 40),
        ServoSpec("HS-755HB", 13.2, 285, 40),
        ServoSpec("HS-805BB", 24.7, 830, 40),
    )
    supply = SupplyRatings(
        servo_supply=RailRating(6.0, 2250),
        logic_supply=RailRating(5.0, 1500),
    )
    # Limits keep the workspace in the upper half-space (the arm stands on
    # a table) while still containing the fully extended horizontal pose
    # (theta = 0, 0, 0, 180, 0).
    joint_limits = (
        (-180.0, 180.0),
        (0.0, 180.0),
        (-180.0, 0.0),
        (0.0, 180.0),
        (-90.0, 90.0),
    )
    return ArmModel(
        dh_table=dh_table,
        mass_chain=mass_chain,
        servos=servos,
        sensor=SensorModelParams(),
        supply=supply,
        joint_limits=joint_limits,
    )


def validate_model(m: ArmModel) -> list[str]:
    """Check every type invariant; returns one message per violation.

    Violations are data, not faults: an empty list means the model is
    valid.
    """
    v: list[str] = []

    if len(m.dh_table) != 5:
        v.append("dh_table must have 5 rows")
    seen_idx = set()
    for i, row in enumerate(m.dh_table):
        if not (-180.0 <= row.alpha <= 180.0):
            v.append(f"dh_table[{i}].alpha must be within [-180, 180]")
        for name, val in (("a", row.a), ("d", row.d)):
            if not math.isfinite(val) or val < 0:
                v.append(f"dh_table[{i}].{name} must be finite and >= 0")
        if not math.isfinite(row.theta_offset):
            v.append(f"dh_table[{i}].theta_offset must be finite")
        if row.joint_index in seen_idx:
            v.append(f"dh_table[{i}].joint_index {row.joint_index} is duplicated")
        if not 1 <= row.joint_index <= 5:
            v.append(f"dh_table[{i}].joint_index must be in 1..5")
        seen_idx.add(row.joint_index)

    if len(m.mass_chain) != 5:
        v.append("mass_chain must have 5 links")
    for i, link in enumerate(m.mass_chain):
        if not (math.isfinite(link.length_L) and link.length_L > 0):
            v.append(f"mass_chain[{i}].length_L must be > 0")
        if not (math.isfinite(link.weight_W) and link.weight_W >= 0):
            v.append(f"mass_chain[{i}].weight_W must be >= 0")
        if not (math.isfinite(link.actuator_A) and link.actuator_A >= 0):
            v.append(f"mass_chain[{i}].actuator_A must be >= 0")

    if len(m.servos) != 6:
        v.append("servos must have 6 entries")
    for i, s in enumerate(m.servos):
        if not (math.isfinite(s.rated_torque) and s.rated_torque > 0):
            v.append(f"servos[{i}].rated_torque must be > 0")
        if s.stall_current <= 0:
            v.append(f"servos[{i}].stall_current must be > 0")
        if s.comm_current < 0:
            v.append(f"servos[{i}].comm_current must be >= 0")
        if not (math.isfinite(s.slew_rate) and s.slew_rate > 0):
            v.append(f"servos[{i}].slew_rate must be > 0")
        if s.angle_range[0] >= s.angle_range[1]:
            v.append(f"servos[{i}].angle_range must be ordered low < high")

    for rail, name in ((m.supply.servo_supply, "servo_supply"), (m.supply.logic_supply, "logic_supply")):
        if rail.max_current <= 0:
            v.append(f"supply.{name}.max_current must be > 0")

    p = m.sensor
    if not (math.isfinite(p.K) and p.K > 0):
        v.append("sensor.K must be > 0")
    if p.valid_range[0] >= p.valid_range[1]:
        v.append("sensor.valid_range must be ordered low < high")
    if p.tall_threshold >= p.empty_area_distance:
        v.append("sensor.tall_threshold must be < sensor.empty_area_distance")
    if p.noise_sigma < 0:
        v.append("sensor.noise_sigma must be >= 0")

    if len(m.joint_limits) != 5:
        v.append("joint_limits must have 5 entries")
    for i, (lo, hi) in enumerate(m.joint_limits):
        if lo >= hi:
            v.append(f"joint_limits[{i}] must be ordered low < high")
        if not (-180.0 <= lo <= 180.0) or not (-180.0 <= hi <= 180.0):
            v.append(f"joint_limits[{i}] must lie within [-180, 180]")

    if len(m.dh_table) == 5:
        if not (math.isfinite(m.reach) and m.reach > 0):
            v.append("reach a3+a4+d5 must be finite and positive")

    return v


# --- JSON config ---------------------------------------------------------
#
# Top-level keys: dh_table, mass_chain, servos, supply, sensor,
# joint_limits. Every key is optional and defaults to the reference
# design; list sections merge entry-by-entry over the defaults so a
# document can override a single field (e.g. row 1's d) without
# restating the rest.


def model_to_dict(m: ArmModel) -> dict[str, Any]:
    return {
        "dh_table": [
            {
                "a": r.a,
                "alpha": r.alpha,
                "d": r.d,
                "theta_offset": r.theta_offset,
                "joint_index": r.joint_index,
            }
            for r in m.dh_table
        ],
        "mass_chain": [
            {
                "name": l.name,
                "length_L": l.length_L,
                "weight_W": l.weight_W,
                "actuator_A": l.actuator_A,
            }
            for l in m.mass_chain
        ],
        "servos": [
            {
                "model_name": s.model_name,
                "rated_torque": s.rated_torque,
                "stall_current": s.stall_current,
                "comm_current": s.comm_current,
                "slew_rate": s.slew_rate,
                "angle_range": list(s.angle_range),
            }
            for s in m.servos
        ],
        "supply": {
            "servo_supply": {"volts": m.supply.servo_supply.volts, "max_current": m.supply.servo_supply.max_current},
            "logic_supply": {"volts": m.supply.logic_supply.volts, "max_current": m.supply.logic_supply.max_current},
        },
        "sensor": {
            "K": m.sensor.K,
            "d0": m.sensor.d0,
            "valid_range": list(m.sensor.valid_range),
            "best_accuracy_band": list(m.sensor.best_accuracy_band),
            "empty_area_distance": m.sensor.empty_area_distance,
            "tall_threshold": m.sensor.tall_threshold,
            "noise_sigma": m.sensor.noise_sigma,
        },
        "joint_limits": [list(lim) for lim in m.joint_limits],
    }


def serialize_model(m: ArmModel) -> str:
    return json.dumps(model_to_dict(m), indent=2, sort_keys=True)


def _require_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path} must be a number, got {value!r}")
    return float(value)


def _require_int(value: Any, path: str) -> int:
    n = _require_number(value, path)
    if n != int(n):
        raise ConfigError(f"{path} must be an integer, got {value!r}")
    return int(n)


def _require_pair(value: Any, path: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{path} must be a [low, high] pair")
    return (_require_number(value[0], f"{path}[0]"), _require_number(value[1], f"{path}[1]"))


def _merge_list_section(
    raw: Any, defaults: tuple, section: str, expected: int, unit: str
) -> list[dict[str, Any]]:
    if not isinstance(raw, list):
        raise ConfigError(f"{section} must be a list")
    if len(raw) != expected:
        raise ConfigError(f"{section} must have {expected} {unit}")
    merged = []
    for i, (entry, default) in enumerate(zip(raw, defaults)):
        if not isinstance(entry, dict):
            raise ConfigError(f"{section}[{i}] must be an object")
        merged.append(entry)
    return merged


def model_from_dict(doc: dict[str, Any]) -> ArmModel:
    """Build a model from a (possibly partial) config dict over defaults."""
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    known = {"dh_table", "mass_chain", "servos", "supply", "sensor", "joint_limits"}
    for key in doc:
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")

    base = default_arm_model()

    dh_table = base.dh_table
    if "dh_table" in doc:
        rows = []
        for i, entry in enumerate(_merge_list_section(doc["dh_table"], base.dh_table, "dh_table", 5, "rows")):
            d = base.dh_table[i]
            rows.append(
                DHRow(
                    a=_require_number(entry.get("a", d.a), f"dh_table[{i}].a"),
                    alpha=_require_number(entry.get("alpha", d.alpha), f"dh_table[{i}].alpha"),
                    d=_require_number(entry.get("d", d.d), f"dh_table[{i}].d"),
                    theta_offset=_require_number(entry.get("theta_offset", d.theta_offset), f"dh_table[{i}].theta_offset"),
                    joint_index=_require_int(entry.get("joint_index", d.joint_index), f"dh_table[{i}].joint_index"),
                )
            )
        dh_table = tuple(rows)

    mass_chain = base.mass_chain
    if "mass_chain" in doc:
        links = []
        for i, entry in enumerate(_merge_list_section(doc["mass_chain"], base.mass_chain, "mass_chain", 5, "links")):
            d = base.mass_chain[i]
            name = entry.get("name", d.name)
            if not isinstance(name, str):
                raise ConfigError(f"mass_chain[{i}].name must be a string")
            links.append(
                LinkMass(
                    name=name,
                    length_L=_require_number(entry.get("length_L", d.length_L), f"mass_chain[{i}].length_L"),
                    weight_W=_require_number(entry.get("weight_W", d.weight_W), f"mass_chain[{i}].weight_W"),
                    actuator_A=_require_number(entry.get("actuator_A", d.actuator_A), f"mass_chain[{i}].actuator_A"),
                )
            )
        mass_chain = tuple(links)

    servos = base.servos
    if "servos" in doc:
        specs = []
        for i, entry in enumerate(_merge_list_section(doc["servos"], base.servos, "servos", 6, "entries")):
            d = base.servos[i]
            name = entry.get("model_name", d.model_name)
            if not isinstance(name, str):
                raise ConfigError(f"servos[{i}].model_name must be a string")
            rng = d.angle_range if "angle_range" not in entry else _require_pair(entry["angle_range"], f"servos[{i}].angle_range")
            specs.append(
                ServoSpec(
                    model_name=name,
                    rated_torque=_require_number(entry.get("rated_torque", d.rated_torque), f"servos[{i}].rated_torque"),
                    stall_current=_require_int(entry.get("stall_current", d.stall_current), f"servos[{i}].stall_current"),
                    comm_current=_require_int(entry.get("comm_current", d.comm_current), f"servos[{i}].comm_current"),
                    slew_rate=_require_number(entry.get("slew_rate", d.slew_rate), f"servos[{i}].slew_rate"),
                    angle_range=rng,
                )
            )
        servos = tuple(specs)

    supply = base.supply
    if "supply" in doc:
        raw = doc["supply"]
        if not isinstance(raw, dict):
            raise ConfigError("supply must be an object")
        rails = {}
        for rail_name in ("servo_supply", "logic_supply"):
            d = getattr(base.supply, rail_name)
            entry = raw.get(rail_name, {})
            if not isinstance(entry, dict):
                raise ConfigError(f"supply.{rail_name} must be an object")
            rails[rail_name] = RailRating(
                volts=_require_number(entry.get("volts", d.volts), f"supply.{rail_name}.volts"),
                max_current=_require_int(entry.get("max_current", d.max_current), f"supply.{rail_name}.max_current"),
            )
        supply = SupplyRatings(**rails)

    sensor = base.sensor
    if "sensor" in doc:
        raw = doc["sensor"]
        if not isinstance(raw, dict):
            raise ConfigError("sensor must be an object")
        d = base.sensor
        sensor = SensorModelParams(
            K=_require_number(raw.get("K", d.K), "sensor.K"),
            d0=_require_number(raw.get("d0", d.d0), "sensor.d0"),
            valid_range=d.valid_range if "valid_range" not in raw else _require_pair(raw["valid_range"], "sensor.valid_range"),
            best_accuracy_band=d.best_accuracy_band
            if "best_accuracy_band" not in raw
            else _require_pair(raw["best_accuracy_band"], "sensor.best_accuracy_band"),
            empty_area_distance=_require_number(raw.get("empty_area_distance", d.empty_area_distance), "sensor.empty_area_distance"),
            tall_threshold=_require_number(raw.get("tall_threshold", d.tall_threshold), "sensor.tall_threshold"),
            noise_sigma=_require_number(raw.get("noise_sigma", d.noise_sigma), "sensor.noise_sigma"),
        )

    joint_limits = base.joint_limits
    if "joint_limits" in doc:
        raw = doc["joint_limits"]
        if not isinstance(raw, list) or len(raw) != 5:
            raise ConfigError("joint_limits must have 5 entries")
        limits = []
        for i, entry in enumerate(raw):
            if entry is None:
                limits.append(base.joint_limits[i])
            else:
                limits.append(_require_pair(entry, f"joint_limits[{i}]"))
        joint_limits = tuple(limits)

    m = ArmModel(
        dh_table=dh_table,
        mass_chain=mass_chain,
        servos=servos,
        sensor=sensor,
        supply=supply,
        joint_limits=joint_limits,
    )
    violations = validate_model(m)
    if violations:
        raise ConfigError("invalid arm config: " + "; ".join(violations))
    return m


def load_arm_config(text: str) -> ArmModel:
    """Parse a JSON config document into a validated ArmModel.

    Parse errors carry the offending line and column; validation errors
    name the violated invariant.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config parse error at line {e.lineno}, column {e.colno}: {e.msg}") from e
    return model_from_dict(doc)


def load_arm_config_file(path: str) -> ArmModel:
    with open(path, "r", encoding="utf-8") as fh:
        return load_arm_config(fh.read())
