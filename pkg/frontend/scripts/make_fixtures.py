"""Record test fixtures for the teleop console from the simulator.

Writes two JSON files under tests/fixtures/:

  fk_cases.json    joint states with the server-computed tip position,
                   used to cross-check the client-side forward kinematics
  op2_session.json a scripted sorting run (short object, program 2)
                   captured as periodic snapshots, each annotated with
                   the server tip, ending in the terminal placed-left state

Run from the repo root with the armforge package installed:
    python frontend/scripts/make_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from armforge.kinematics import JointState, forward_kinematics
from armforge.model import default_arm_model, model_to_dict
from armforge.sim import PlaceObject, Program, RunProgram, Simulator

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def fk_cases() -> dict:
    model = default_arm_model()
    rng = np.random.default_rng(99)
    cases = []

    named = [
        ("straight", (0.0, 0.0, 0.0, 180.0, 0.0)),
        ("start-pose", (0.0, 90.0, -90.0, 180.0, 0.0)),
        ("measure-ish", (0.0, 64.0, -57.5, 83.5, 0.0)),
    ]
    for name, theta in named:
        tip = forward_kinematics(model, JointState(theta=theta)).translation
        cases.append({"name": name, "joints": list(theta), "tip": [float(v) for v in tip]})
    for i in range(40):
        theta = tuple(float(rng.uniform(lo, hi)) for lo, hi in model.joint_limits)
        tip = forward_kinematics(model, JointState(theta=theta)).translation
        cases.append({"name": f"random-{i}", "joints": list(theta), "tip": [float(v) for v in tip]})
    return {"model": model_to_dict(model), "cases": cases}


def op2_session() -> dict:
    model = default_arm_model()
    sim = Simulator(model)
    assert sim.submit_command(PlaceObject(height=2.0)).accepted
    assert sim.submit_command(RunProgram(Program.OP2)).accepted

    frames = []

    def capture():
        snap = sim.snapshot()
        tip = forward_kinematics(model, sim.joints).translation
        frames.append({"snapshot": snap, "server_tip": [float(v) for v in tip]})

    capture()
    ticks = 0
    while sim.program is not None:
        sim.step(0.02)
        ticks += 1
        if ticks % 5 == 0:
            capture()
    capture()  # terminal state, program done
    return {"model": model_to_dict(model), "frames": frames}


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "fk_cases.json").write_text(json.dumps(fk_cases(), indent=1, sort_keys=True))
    session = op2_session()
    (FIXTURES / "op2_session.json").write_text(json.dumps(session, indent=1, sort_keys=True))
    last = session["frames"][-1]["snapshot"]
    print(f"wrote {len(session['frames'])} session frames; final scene: {last['scene']}")


if __name__ == "__main__":
    main()
