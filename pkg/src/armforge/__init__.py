"""armforge: desk-scale 5-DOF sorting-arm toolkit.

Forward/inverse kinematics, static torque and payload analysis, rail
power budgeting, an IR distance-sensor model and a deterministic stepped
simulator for the three autonomous sorting programs plus manual teleop.
"""

from armforge.kinematics import (
    HomogeneousTransform,
    JointState,
    PointCloud,
    PoseTarget,
    degrees_of_freedom,
    dh_transform,
    closed_form_position,
    forward_kinematics,
    inverse_kinematics,
    sample_workspace,
    workspace_extent,
)
from armforge.model import (
    ArmModel,
    DHRow,
    LinkMass,
    ServoSpec,
    SupplyRatings,
    default_arm_model,
    load_arm_config,
    serialize_model,
    validate_model,
)
from armforge.power import BudgetReport, stall_budget, validate_motion_plan
from armforge.sensor import (
    ObjectClass,
    SensorModelParams,
    SensorReading,
    classify_object,
    distance_to_voltage,
    measure,
    voltage_to_distance,
)
from armforge.sim import Program, Simulator, load_scenario, simulator_from_scenario
from armforge.statics import TorqueReport, joint_torques, max_payload, torque_load_increment

__version__ = "0.1.0"

__all__ = [
    "ArmModel",
    "BudgetReport",
    "DHRow",
    "HomogeneousTransform",
    "JointState",
    "LinkMass",
    "ObjectClass",
    "PointCloud",
    "PoseTarget",
    "Program",
    "SensorModelParams",
    "SensorReading",
    "ServoSpec",
    "Simulator",
    "SupplyRatings",
    "TorqueReport",
    "classify_object",
    "closed_form_position",
    "default_arm_model",
    "degrees_of_freedom",
    "dh_transform",
    "distance_to_voltage",
    "forward_kinematics",
    "inverse_kinematics",
    "joint_torques",
    "load_arm_config",
    "load_scenario",
    "max_payload",
    "measure",
    "sample_workspace",
    "serialize_model",
    "simulator_from_scenario",
    "stall_budget",
    "torque_load_increment",
    "validate_model",
    "validate_motion_plan",
    "voltage_to_distance",
    "workspace_extent",
]
