"""Deterministic stepped simulator for the sorting arm.

The simulator owns a scene (sorting area, two buckets, two placement
areas), a six-channel servo bank (five joints plus the gripper) and an
event log. Motion respects the power budget's one-servo-at-a-time rule:
commanded moves queue up and execute strictly sequentially at each
servo's slew rate. The three autonomous programs drive the arm through
fixed waypoints (stored as Cartesian targets plus grip pitch and solved
through inverse kinematics), measure the sorting area with the IR
sensor, classify the object by height and deliver it:

* program 1: any detected object goes to one configured bucket
* program 2: short objects go to the left bucket, tall to the right
* program 3: same split, but onto the two placement areas

Everything is a pure function of the initial state and the command
sequence; identical runs produce byte-identical event logs. Exactly one
owner may mutate a Simulator; observers take snapshots.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from armforge import sensor as sensor_mod
from armforge.kinematics import (
    JointState,
    KinematicsError,
    PoseTarget,
    chain_frames,
    inverse_kinematics,
)
from armforge.model import ArmModel
from armforge.sensor import ObjectClass, SensorReading

DEFAULT_DT = 0.02  # 50 Hz tick, the usual servo frame rate
GRIP_TRAVEL_DEG = 90.0  # gripper servo travel mapped onto opening 0..1
MEASURE_POSE_TOL_DEG = 1.0
ATTACH_RADIUS_CM = 1.0
MANUAL_DROP_RADIUS_CM = 3.0
_FAR_READING_CM = 999.0  # sentinel when the sensor ray misses the table

# Channel -> model.servos index. Channels 1..5 are the base, shoulder,
# elbow, wrist and roll joints; channel 6 is the gripper.
JOINT_SERVO_INDEX = (0, 5, 4, 3, 2)
GRIP_SERVO_INDEX = 1


class Location(str, enum.Enum):
    SORTING_AREA = "sorting_area"
    LEFT_BUCKET = "left_bucket"
    RIGHT_BUCKET = "right_bucket"
    AREA_SHORT = "area_short"
    AREA_TALL = "area_tall"
    GRIPPED = "gripped"


class Program(str, enum.Enum):
    OP1 = "op1"
    OP2 = "op2"
    OP3 = "op3"


@dataclass
class SceneObject:
    id: str
    height: float  # cm
    location: Location = Location.SORTING_AREA


@dataclass(frozen=True)
class Waypoint:
    """Cartesian grip-tip target (cm) plus grip pitch (deg)."""

    position: tuple[float, float, float]
    psi: float = -90.0


# The measure waypoint hovers the sensor over the sorting area at the
# empty-area distance; drop waypoints sit above their zones. All are
# reachable with the reference geometry and elbow-up solutions.
DEFAULT_WAYPOINTS: dict[str, Waypoint] = {
    "measure": Waypoint((25.0, 0.0, 13.8)),
    "left_bucket": Waypoint((15.0, 18.0, 10.0)),
    "right_bucket": Waypoint((15.0, -18.0, 10.0)),
    "area_short": Waypoint((20.0, 12.0, 6.0)),
    "area_tall": Waypoint((20.0, -12.0, 6.0)),
}

DEFAULT_START = JointState(theta=(0.0, 90.0, -90.0, 180.0, 0.0), grip_opening=1.0)

_DROP_LOCATION_WAYPOINT = {
    Location.LEFT_BUCKET: "left_bucket",
    Location.RIGHT_BUCKET: "right_bucket",
    Location.AREA_SHORT: "area_short",
    Location.AREA_TALL: "area_tall",
}


# --- Commands -------------------------------------------------------------


@dataclass(frozen=True)
class SetJointTargets:
    joints: JointState


@dataclass(frozen=True)
class Jog:
    servo: int  # channel 1..6
    delta_deg: float


@dataclass(frozen=True)
class Grip:
    action: str  # "open" | "close"


@dataclass(frozen=True)
class RunProgram:
    program: Program


@dataclass(frozen=True)
class PlaceObject:
    height: float
    object_id: Optional[str] = None


@dataclass(frozen=True)
class Reset:
    pass


Command = SetJointTargets | Jog | Grip | RunProgram | PlaceObject | Reset

_MANUAL_COMMANDS = (SetJointTargets, Jog, Grip)


@dataclass(frozen=True)
class CommandResult:
    accepted: bool
    reason: Optional[str] = None


@dataclass
class ProgramRun:
    program: Program
    phase: str
    started_at: float
    classification: Optional[ObjectClass] = None
    estimated_height: Optional[float] = None
    pick_joints: Optional[JointState] = None
    dest_joints: Optional[JointState] = None
    dest_location: Optional[Location] = None


class SimProgramError(RuntimeError):
    """A program could not run to completion (e.g. unreachable waypoint)."""


# --- Scenario files -------------------------------------------------------


@dataclass
class Scenario:
    objects: list[SceneObject] = field(default_factory=list)
    program: Optional[Program] = None
    dt: float = DEFAULT_DT
    op1_destination: Location = Location.LEFT_BUCKET
    waypoints: Optional[dict[str, Waypoint]] = None
    start: Optional[JointState] = None


def load_scenario(text: str) -> Scenario:
    """Parse a scenario JSON document: initial objects plus the program."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"scenario parse error at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise ValueError("scenario must be a JSON object")

    objects = []
    in_area = 0
    for i, entry in enumerate(doc.get("objects", [])):
        if not isinstance(entry, dict):
            raise ValueError(f"objects[{i}] must be an object")
        height = entry.get("height")
        if not isinstance(height, (int, float)) or height <= 0:
            raise ValueError(f"objects[{i}].height must be a positive number")
        loc_name = entry.get("location", Location.SORTING_AREA.value)
        try:
            loc = Location(loc_name)
        except ValueError:
            raise ValueError(f"objects[{i}].location {loc_name!r} is not a known location") from None
        if loc is Location.GRIPPED:
            raise ValueError(f"objects[{i}] cannot start gripped")
        if loc is Location.SORTING_AREA:
            in_area += 1
        objects.append(SceneObject(id=str(entry.get("id", f"obj{i + 1}")), height=float(height), location=loc))
    if in_area > 1:
        raise ValueError("at most one object may start in the sorting area")

    program = None
    if doc.get("program") is not None:
        try:
            program = Program(doc["program"])
        except ValueError:
            raise ValueError(f"unknown program {doc['program']!r}") from None

    dt = doc.get("dt", DEFAULT_DT)
    if not isinstance(dt, (int, float)) or dt <= 0:
        raise ValueError("dt must be a positive number")

    op1_dest = Location(doc.get("op1_destination", Location.LEFT_BUCKET.value))
    if op1_dest not in _DROP_LOCATION_WAYPOINT:
        raise ValueError("op1_destination must be a bucket or placement area")

    waypoints = None
    if "waypoints" in doc:
        if not isinstance(doc["waypoints"], dict):
            raise ValueError("waypoints must be an object")
        waypoints = dict(DEFAULT_WAYPOINTS)
        for name, entry in doc["waypoints"].items():
            if name not in DEFAULT_WAYPOINTS:
                raise ValueError(f"unknown waypoint {name!r}")
            if not isinstance(entry, dict):
                raise ValueError(f"waypoints.{name} must be an object")
            pos = entry.get("position")
            if not isinstance(pos, list) or len(pos) != 3:
                raise ValueError(f"waypoints.{name}.position must be [x, y, z]")
            waypoints[name] = Waypoint(
                position=(float(pos[0]), float(pos[1]), float(pos[2])),
                psi=float(entry.get("psi", -90.0)),
            )

    start = None
    if "start_joints" in doc:
        theta = doc["start_joints"]
        if not isinstance(theta, list) or len(theta) != 5:
            raise ValueError("start_joints must list 5 angles")
        start = JointState(theta=tuple(float(v) for v in theta), grip_opening=1.0)

    return Scenario(
        objects=objects,
        program=program,
        dt=float(dt),
        op1_destination=op1_dest,
        waypoints=waypoints,
        start=start,
    )


# --- Simulator ------------------------------------------------------------


class Simulator:
    """Single-owner stepped simulation of the arm and its scene."""

    def __init__(
        self,
        model: ArmModel,
        waypoints: Optional[dict[str, Waypoint]] = None,
        start: Optional[JointState] = None,
        op1_destination: Location = Location.LEFT_BUCKET,
        sensor_mount_height: float = 13.8,
    ):
        self.model = model
        self.waypoints = dict(DEFAULT_WAYPOINTS if waypoints is None else waypoints)
        self.op1_destination = op1_destination
        self.sensor_mount_height = sensor_mount_height

        start = DEFAULT_START if start is None else start
        self._start_pose = start
        # Channels 0..4: joint angles (deg); channel 5: gripper angle
        # (deg, 0 closed .. GRIP_TRAVEL_DEG open).
        self._pos = list(start.theta) + [start.grip_opening * GRIP_TRAVEL_DEG]
        self._targets = list(self._pos)
        self._queue: list[int] = []
        self._active: Optional[int] = None
        self._move_start_t = 0.0
        self._move_from = 0.0

        self.clock = 0.0
        self.scene: list[SceneObject] = []
        self.program: Optional[ProgramRun] = None
        self.events: list[dict[str, Any]] = []
        self._object_counter = 0

        # Measure pose in joint space; None when the configured waypoint
        # is unreachable (programs will then fail with a program error).
        try:
            self._measure_joints: Optional[JointState] = self._solve(self.waypoints["measure"])
        except KinematicsError:
            self._measure_joints = None

    # -- basic accessors --

    @property
    def joints(self) -> JointState:
        return JointState(theta=tuple(self._pos[:5]), grip_opening=self._pos[5] / GRIP_TRAVEL_DEG)

    @property
    def joint_targets(self) -> JointState:
        return JointState(theta=tuple(self._targets[:5]), grip_opening=self._targets[5] / GRIP_TRAVEL_DEG)

    @property
    def active_servo(self) -> Optional[int]:
        return None if self._active is None else self._active + 1

    def _slew_rate(self, channel: int) -> float:
        idx = GRIP_SERVO_INDEX if channel == 5 else JOINT_SERVO_INDEX[channel]
        return self.model.servos[idx].slew_rate

    def _limits(self, channel: int) -> tuple[float, float]:
        if channel == 5:
            return (0.0, GRIP_TRAVEL_DEG)
        return self.model.joint_limits[channel]

    def _log(self, kind: str, **detail: Any) -> None:
        self.events.append({"t": round(self.clock, 9), "kind": kind, "detail": detail})

    def _solve(self, wp: Waypoint) -> JointState:
        return inverse_kinematics(self.model, PoseTarget(position=wp.position, psi=wp.psi))

    def _tip(self) -> np.ndarray:
        return chain_frames(self.model, self.joints)[5].translation

    # -- commands --

    def submit_command(self, cmd: Command) -> CommandResult:
        """Queue motion or mutate the scene; programs lock out manual moves."""
        if self.program is not None and isinstance(cmd, _MANUAL_COMMANDS):
            return self._reject(cmd, "program running: manual commands are locked out")

        if isinstance(cmd, Jog):
            if not 1 <= cmd.servo <= 6:
                return self._reject(cmd, f"unknown servo index {cmd.servo}")
            ch = cmd.servo - 1
            self._set_channel_target(ch, self._targets[ch] + cmd.delta_deg)
            return CommandResult(True)

        if isinstance(cmd, SetJointTargets):
            for ch, angle in enumerate(cmd.joints.theta):
                self._set_channel_target(ch, angle)
            self._set_channel_target(5, cmd.joints.grip_opening * GRIP_TRAVEL_DEG)
            return CommandResult(True)

        if isinstance(cmd, Grip):
            if cmd.action not in ("open", "close"):
                return self._reject(cmd, f"unknown grip action {cmd.action!r}")
            self._set_channel_target(5, GRIP_TRAVEL_DEG if cmd.action == "open" else 0.0)
            return CommandResult(True)

        if isinstance(cmd, PlaceObject):
            if cmd.height <= 0:
                return self._reject(cmd, "object height must be > 0")
            if any(o.location is Location.SORTING_AREA for o in self.scene):
                return self._reject(cmd, "sorting area already occupied")
            self._object_counter += 1
            obj_id = cmd.object_id or f"obj{self._object_counter}"
            if any(o.id == obj_id for o in self.scene):
                return self._reject(cmd, f"object id {obj_id!r} already exists")
            self.scene.append(SceneObject(id=obj_id, height=cmd.height))
            self._log("object_placed", id=obj_id, height=round(cmd.height, 6))
            return CommandResult(True)

        if isinstance(cmd, RunProgram):
            if self.program is not None:
                return self._reject(cmd, "program already running")
            self._start_program(cmd.program)
            return CommandResult(True)

        if isinstance(cmd, Reset):
            if self.program is not None:
                self._log("program_finished", program=self.program.program.value, outcome="aborted")
                self.program = None
            self._pos = list(self._start_pose.theta) + [self._start_pose.grip_opening * GRIP_TRAVEL_DEG]
            self._targets = list(self._pos)
            self._queue.clear()
            self._active = None
            self.scene.clear()
            self._log("reset")
            return CommandResult(True)

        return self._reject(cmd, f"unknown command {type(cmd).__name__}")

    def _reject(self, cmd: Command, reason: str) -> CommandResult:
        self._log("command_rejected", command=type(cmd).__name__, reason=reason)
        return CommandResult(False, reason)

    def _set_channel_target(self, ch: int, value: float) -> None:
        lo, hi = self._limits(ch)
        clamped = min(max(value, lo), hi)
        if clamped != value:
            self._log(
                "clamp",
                servo=ch + 1,
                requested=round(value, 6),
                clamped_to=round(clamped, 6),
            )
        self._targets[ch] = clamped
        if abs(self._targets[ch] - self._pos[ch]) > 1e-9 and ch not in self._queue and ch != self._active:
            self._queue.append(ch)

    def _enqueue_joint_targets(self, q: JointState, include_grip: bool = False) -> None:
        for ch, angle in enumerate(q.theta):
            self._set_channel_target(ch, angle)
        if include_grip:
            self._set_channel_target(5, q.grip_opening * GRIP_TRAVEL_DEG)

    # -- stepping --

    def step(self, dt: float) -> None:
        """Advance one tick: move the active servo, then let the program
        react once the motion queue drains."""
        if dt <= 0:
            raise ValueError("dt must be > 0")
        self.clock += dt

        if self._active is None and self._queue:
            self._active = self._queue.pop(0)
            self._move_start_t = self.clock - dt
            self._move_from = self._pos[self._active]

        if self._active is not None:
            ch = self._active
            rate = self._slew_rate(ch)
            delta = self._targets[ch] - self._pos[ch]
            step_max = rate * dt
            if abs(delta) <= step_max + 1e-12:
                self._pos[ch] = self._targets[ch]
                self._log(
                    "servo_move",
                    servo=ch + 1,
                    from_deg=round(self._move_from, 6),
                    to_deg=round(self._pos[ch], 6),
                    t_start=round(self._move_start_t, 9),
                    t_end=round(self.clock, 9),
                )
                self._active = None
                if ch == 5:
                    self._grip_settled()
            else:
                self._pos[ch] += math.copysign(step_max, delta)

        while self.program is not None and self._active is None and not self._queue:
            if not self._advance_program():
                break

    def motion_plan(self) -> list[tuple[int, float, float]]:
        """Completed moves as (servo, start, end) intervals for the power
        budget's overlap check."""
        return [
            (e["detail"]["servo"], e["detail"]["t_start"], e["detail"]["t_end"])
            for e in self.events
            if e["kind"] == "servo_move"
        ]

    # -- sensing --

    def read_sensor(self) -> SensorReading:
        """Current IR reading.

        At the measuring pose (every joint within 1 deg) the sensor looks
        straight down at the sorting area: distance is the mount height
        minus the height of whatever occupies the area. Anywhere else the
        reading is the ray distance from the grip along its approach
        direction down to the work plane, far-capped when the ray misses.
        """
        params = self.model.sensor
        if self._at_measure_pose():
            occupant = self._object_at(Location.SORTING_AREA)
            distance = self.sensor_mount_height - (occupant.height if occupant else 0.0)
        else:
            frames = chain_frames(self.model, self.joints)
            tip = frames[5].translation
            approach = frames[5].rotation[:, 2]
            if approach[2] < -1e-9 and tip[2] > 0:
                distance = min(tip[2] / -approach[2], _FAR_READING_CM)
            else:
                distance = _FAR_READING_CM
        seed = int(round(self.clock * 1e6)) & 0x7FFFFFFF
        return sensor_mod.measure(params, max(distance, 1e-9), seed)

    def _at_measure_pose(self) -> bool:
        if self._measure_joints is None:
            return False
        return all(
            abs(p - t) <= MEASURE_POSE_TOL_DEG
            for p, t in zip(self._pos[:5], self._measure_joints.theta)
        )

    def _object_at(self, loc: Location) -> Optional[SceneObject]:
        for obj in self.scene:
            if obj.location is loc:
                return obj
        return None

    # -- gripping --

    def _grip_settled(self) -> None:
        """Attach/detach bookkeeping once the gripper finishes moving."""
        closed = self._pos[5] <= 1e-9
        if closed:
            obj = self._object_at(Location.SORTING_AREA)
            if obj is not None:
                pick_point = np.array(
                    [self.waypoints["measure"].position[0], self.waypoints["measure"].position[1], obj.height]
                )
                if float(np.linalg.norm(self._tip() - pick_point)) <= ATTACH_RADIUS_CM:
                    obj.location = Location.GRIPPED
                    self._log("pick", id=obj.id)
            return
        opened = self._pos[5] >= GRIP_TRAVEL_DEG - 1e-9
        if opened:
            obj = self._object_at(Location.GRIPPED)
            if obj is None:
                return
            if self.program is not None and self.program.dest_location is not None:
                obj.location = self.program.dest_location
                self._log("place", id=obj.id, location=obj.location.value)
                return
            self._manual_release(obj)

    def _manual_release(self, obj: SceneObject) -> None:
        """Drop into whichever zone the grip hovers over, nearest first."""
        tip = self._tip()
        candidates: list[tuple[float, Location]] = []
        for loc, name in _DROP_LOCATION_WAYPOINT.items():
            x, y, _ = self.waypoints[name].position
            candidates.append((math.hypot(tip[0] - x, tip[1] - y), loc))
        if self._object_at(Location.SORTING_AREA) is None:
            x, y, _ = self.waypoints["measure"].position
            candidates.append((math.hypot(tip[0] - x, tip[1] - y), Location.SORTING_AREA))
        candidates.sort(key=lambda c: (c[0], c[1].value))
        dist, loc = candidates[0]
        if dist > MANUAL_DROP_RADIUS_CM:
            self._log(
                "command_rejected",
                command="Grip",
                reason=f"no drop zone within {MANUAL_DROP_RADIUS_CM:g} cm; still holding {obj.id}",
            )
            return
        obj.location = loc
        self._log("place", id=obj.id, location=loc.value)

    # -- programs --

    def _start_program(self, program: Program) -> None:
        self._log("program_started", program=program.value)
        self.program = ProgramRun(program=program, phase="", started_at=self.clock)
        try:
            if self._measure_joints is None:
                raise SimProgramError("measure waypoint is unreachable")
            # Destination waypoints are solved up front so a misconfigured
            # scene fails fast.
            for name in self._program_waypoints(program):
                self._solve(self.waypoints[name])
        except (KinematicsError, SimProgramError) as e:
            self._program_error(str(e))
            return
        self._enter_phase("move_to_start")

    def _program_waypoints(self, program: Program) -> list[str]:
        if program is Program.OP1:
            return [_DROP_LOCATION_WAYPOINT[self.op1_destination]]
        if program is Program.OP2:
            return ["left_bucket", "right_bucket"]
        return ["area_short", "area_tall"]

    def _program_error(self, reason: str) -> None:
        self._log("program_error", reason=reason)
        if self.program is not None:
            self._log("program_finished", program=self.program.program.value, outcome="error")
        self.program = None

    def _enter_phase(self, phase: str) -> None:
        run = self.program
        assert run is not None
        run.phase = phase
        self._log("phase", program=run.program.value, phase=phase)
        if phase == "move_to_start":
            self._enqueue_joint_targets(self._start_pose, include_grip=True)
        elif phase == "move_to_measure":
            assert self._measure_joints is not None
            self._enqueue_joint_targets(self._measure_joints)
        elif phase == "pre_pick_open":
            self._set_channel_target(5, GRIP_TRAVEL_DEG)
        elif phase == "move_to_pick":
            assert run.pick_joints is not None
            self._enqueue_joint_targets(run.pick_joints)
        elif phase == "grip_close":
            self._set_channel_target(5, 0.0)
        elif phase == "move_to_dest":
            assert run.dest_joints is not None
            self._enqueue_joint_targets(run.dest_joints)
        elif phase == "release":
            self._set_channel_target(5, GRIP_TRAVEL_DEG)
        elif phase == "return_to_start":
            self._enqueue_joint_targets(self._start_pose)

    def _advance_program(self) -> bool:
        """One phase transition; returns False once the program is done."""
        run = self.program
        assert run is not None
        phase = run.phase

        if phase == "move_to_start":
            self._enter_phase("move_to_measure")
        elif phase == "move_to_measure":
            return self._do_measure()
        elif phase == "pre_pick_open":
            self._enter_phase("move_to_pick")
        elif phase == "move_to_pick":
            self._enter_phase("grip_close")
        elif phase == "grip_close":
            if self._object_at(Location.GRIPPED) is None:
                self._program_error("grip closed but nothing was picked")
                return False
            self._enter_phase("move_to_dest")
        elif phase == "move_to_dest":
            self._enter_phase("release")
        elif phase == "release":
            self._enter_phase("return_to_start")
        elif phase == "return_to_start":
            self._log("program_finished", program=run.program.value, outcome="completed")
            self.program = None
            return False
        else:
            self._program_error(f"unknown phase {phase!r}")
            return False
        return True

    def _do_measure(self) -> bool:
        run = self.program
        assert run is not None
        run.phase = "measure"
        self._log("phase", program=run.program.value, phase="measure")
        reading = self.read_sensor()
        self._log(
            "sensor_reading",
            distance=round(reading.distance, 6),
            voltage=round(reading.voltage, 6),
            in_valid_range=reading.in_valid_range,
        )
        verdict = sensor_mod.classify_object(self.model.sensor, reading.distance)
        run.classification = verdict
        estimated = self.sensor_mount_height - reading.distance
        run.estimated_height = estimated
        self._log(
            "classification",
            result=verdict.value,
            estimated_height=round(max(estimated, 0.0), 6),
        )
        if verdict is ObjectClass.EMPTY:
            self._enter_phase("return_to_start")
            return True

        measure_wp = self.waypoints["measure"]
        pick = Waypoint(
            position=(measure_wp.position[0], measure_wp.position[1], estimated),
            psi=measure_wp.psi,
        )
        dest = self._destination_for(run.program, verdict)
        try:
            run.pick_joints = self._solve(pick)
            run.dest_joints = self._solve(self.waypoints[_DROP_LOCATION_WAYPOINT[dest]])
        except KinematicsError as e:
            self._program_error(str(e))
            return False
        run.dest_location = dest
        self._enter_phase("pre_pick_open")
        return True

    def _destination_for(self, program: Program, verdict: ObjectClass) -> Location:
        if program is Program.OP1:
            return self.op1_destination
        if program is Program.OP2:
            return Location.LEFT_BUCKET if verdict is ObjectClass.SHORT else Location.RIGHT_BUCKET
        return Location.AREA_SHORT if verdict is ObjectClass.SHORT else Location.AREA_TALL


    def run_program_to_completion(self, program: Program, dt: float = DEFAULT_DT) -> list[dict[str, Any]]:
        """Run one program to its terminal phase; returns its event slice.

        Raises SimProgramError when the program aborts (unreachable
        waypoint, missed pick) instead of completing.
        """
        if self.program is not None:
            raise SimProgramError("program already running")
        first_event = len(self.events)
        result = self.submit_command(RunProgram(program))
        if not result.accepted:
            raise SimProgramError(result.reason or "program rejected")
        deadline = self.clock + 600.0
        while self.program is not None:
            self.step(dt)
            if self.clock > deadline:
                self._program_error("program exceeded the 600 s watchdog")
                break
        events = self.events[first_event:]
        for e in events:
            if e["kind"] in ("program_error",):
                raise SimProgramError(e["detail"]["reason"])
        return events

    # -- snapshots / export --

    def snapshot(self, event_tail: int = 50) -> dict[str, Any]:
        """JSON-ready view of the current state, consistent at one tick."""
        reading = self.read_sensor()
        verdict = sensor_mod.classify_object(self.model.sensor, reading.distance)
        return {
            "clock": round(self.clock, 9),
            "joints": [round(v, 9) for v in self._pos[:5]],
            "grip_opening": round(self._pos[5] / GRIP_TRAVEL_DEG, 9),
            "active_servo": self.active_servo,
            "sensor": {
                "distance": round(reading.distance, 6),
                "voltage": round(reading.voltage, 6),
                "in_valid_range": reading.in_valid_range,
                "classification": verdict.value,
            },
            "scene": [
                {"id": o.id, "height": o.height, "location": o.location.value} for o in self.scene
            ],
            "program": None
            if self.program is None
            else {
                "program": self.program.program.value,
                "phase": self.program.phase,
                "started_at": round(self.program.started_at, 9),
            },
            "events": self.events[-event_tail:],
        }


def events_to_jsonl(events: list[dict[str, Any]]) -> str:
    """One event per line: t, kind, detail."""
    return "\n".join(json.dumps(e, sort_keys=True) for e in events) + ("\n" if events else "")


def apply_scenario(sim: Simulator, scenario: Scenario) -> None:
    """Load a scenario's objects into a fresh simulator."""
    for obj in scenario.objects:
        sim.scene.append(SceneObject(id=obj.id, height=obj.height, location=obj.location))
        sim._object_counter += 1
        sim._log("object_placed", id=obj.id, height=round(obj.height, 6))


def simulator_from_scenario(model: ArmModel, scenario: Scenario) -> Simulator:
    sim = Simulator(
        model,
        waypoints=scenario.waypoints,
        start=scenario.start,
        op1_destination=scenario.op1_destination,
    )
    apply_scenario(sim, scenario)
    return sim
