"""Command-line entry point for the analyses and headless simulation.

Subcommands: fk, ik, torque, power-budget, workspace, simulate, serve.
Angles are degrees, positions centimeters; outputs echo their units.
Every subcommand accepts --config (or the ARMFORGE_CONFIG environment
variable) and the analysis commands accept --json. Exit code 0 means no
error; reachability and limit verdicts from ik exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from armforge import kinematics as kin
from armforge import power, statics
from armforge.model import ArmModel, ConfigError, default_arm_model, load_arm_config_file
from armforge.sim import events_to_jsonl, load_scenario, simulator_from_scenario


def _load_model(args: argparse.Namespace) -> ArmModel:
    path = args.config or os.environ.get("ARMFORGE_CONFIG")
    if path:
        return load_arm_config_file(path)
    return default_arm_model()


def _parse_floats(text: str, count: int, what: str, parser: argparse.ArgumentParser) -> list[float]:
    parts = [p for p in text.split(",") if p.strip() != ""]
    if len(parts) != count:
        parser.error(f"{what} expects {count} comma-separated values, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        parser.error(f"{what} must be numeric")
    raise AssertionError("unreachable")


def _print_transform(t: kin.HomogeneousTransform) -> None:
    print("rotation:")
    for row in t.rotation:
        print("  " + "  ".join(f"{v: .6f}" for v in row))
    print("translation [cm]: " + "  ".join(f"{v:.4f}" for v in t.translation))


def cmd_fk(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    model = _load_model(args)
    theta = _parse_floats(args.theta, 5, "--theta", parser)
    q = kin.JointState(theta=tuple(theta))
    try:
        t = kin.forward_kinematics(model, q)
    except kin.JointLimitError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    psi = kin.grip_pitch(model, q)
    if args.json:
        print(
            json.dumps(
                {
                    "position_cm": [round(v, 10) for v in t.translation],
                    "rotation": [[round(v, 10) for v in row] for row in t.rotation],
                    "psi_deg": round(psi, 10),
                },
                sort_keys=True,
            )
        )
    else:
        x, y, z = t.translation
        print(f"tip position [cm]: x={x:.4f} y={y:.4f} z={z:.4f}")
        print(f"grip pitch [deg]: {psi:.4f}")
        _print_transform(t)
    return 0


def cmd_ik(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    model = _load_model(args)
    x, y, z = _parse_floats(args.target, 3, "--target", parser)
    target = kin.PoseTarget(position=(x, y, z), psi=args.psi)
    try:
        q = kin.inverse_kinematics(model, target, branch=args.branch)
    except kin.SingularTargetError:
        _emit_verdict(args, "singular: theta1 indeterminate")
        return 1
    except kin.UnreachableTargetError:
        _emit_verdict(args, "unreachable")
        return 1
    except kin.JointLimitError as e:
        _emit_verdict(args, f"joint-limit violation: {e}")
        return 1
    if args.json:
        print(json.dumps({"theta_deg": [round(v, 10) for v in q.theta], "branch": args.branch}, sort_keys=True))
    else:
        print("theta [deg]: " + "  ".join(f"{v:.4f}" for v in q.theta))
    return 0


def _emit_verdict(args: argparse.Namespace, verdict: str) -> None:
    if args.json:
        print(json.dumps({"error": verdict}))
    else:
        print(verdict)


def cmd_torque(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    model = _load_model(args)
    if args.max_payload:
        overrides = statics.REFERENCE_ZERO_LOAD_TORQUES if args.paper_offsets else None
        payload = statics.max_payload(model, zero_load_overrides=overrides)
        if args.json:
            print(
                json.dumps(
                    {"max_payload_gf": round(payload, 3), "paper_offsets": bool(args.paper_offsets)},
                    sort_keys=True,
                )
            )
        else:
            source = "reference zero-load offsets" if args.paper_offsets else "computed equations"
            print(f"max payload [gf]: {payload:.1f} ({source})")
        return 0

    if args.load < 0:
        parser.error("--load must be >= 0")
    report = statics.joint_torques(model, args.load)
    if args.json:
        print(
            json.dumps(
                {
                    "load_gf": report.load_A1,
                    "torques_kgcm": [round(v, 6) for v in report.torques],
                    "margins_kgcm": [round(v, 6) for v in report.margins],
                    "feasible": report.feasible,
                    "notes": list(report.notes),
                },
                sort_keys=True,
            )
        )
        return 0
    print(f"static torque report at load {report.load_A1:g} gf (worst case: horizontal, extended)")
    print(f"{'equation':<10}{'servo':<12}{'required':>12}{'rated':>10}{'margin':>10}")
    for k, (torque, margin) in enumerate(zip(report.torques, report.margins), start=1):
        servo = model.servos[k]
        print(
            f"{k:<10}{servo.model_name:<12}{torque:>12.3f}{servo.rated_torque:>10.2f}{margin:>10.3f}"
        )
    print("units: kg*cm; equation 1 is the grip-most pivot")
    print(f"feasible: {'yes' if report.feasible else 'no'}")
    for note in report.notes:
        print(f"note: {note}")
    return 0


def cmd_power_budget(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    model = _load_model(args)
    report = power.stall_budget(model)
    if args.json:
        print(
            json.dumps(
                {
                    "total_stall_ma": report.total_stall,
                    "servo_supply_limit_ma": report.servo_supply_limit,
                    "simultaneous_feasible": report.simultaneous_feasible,
                    "worst_single_servo_ma": report.worst_single_servo,
                    "logic_total_ma": report.logic_total,
                    "logic_limit_ma": report.logic_limit,
                    "logic_feasible": report.logic_feasible,
                },
                sort_keys=True,
            )
        )
        return 0
    print("servo rail (stall, worst case):")
    print(f"  total draw [mA]:   {report.total_stall}")
    print(f"  supply limit [mA]: {report.servo_supply_limit}")
    feas = "yes" if report.simultaneous_feasible else "no (sequence one servo at a time)"
    print(f"  all-at-once feasible: {feas}")
    print(f"  worst single servo [mA]: {report.worst_single_servo}")
    print("logic rail:")
    print(f"  total draw [mA]:   {report.logic_total}")
    print(f"  supply limit [mA]: {report.logic_limit}")
    print(f"  feasible: {'yes' if report.logic_feasible else 'no'}")
    return 0


def cmd_workspace(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.steps < 2:
        parser.error("--steps must be >= 2")
    model = _load_model(args)
    cloud = kin.sample_workspace(model, args.steps)
    extent = kin.workspace_extent(cloud)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(kin.point_cloud_to_csv(cloud))
    if args.ply:
        with open(args.ply, "w", encoding="utf-8") as fh:
            fh.write(kin.point_cloud_to_ply(cloud))
    if args.json:
        print(
            json.dumps(
                {
                    "points": len(cloud),
                    "max_reach_cm": round(extent.max_reach, 6),
                    "diameter_cm": round(extent.diameter, 6),
                    "reach_cm": round(model.reach, 6),
                },
                sort_keys=True,
            )
        )
        return 0
    print(f"workspace sample: {len(cloud)} points ({args.steps} steps per joint)")
    print(f"max horizontal reach [cm]: {extent.max_reach:.4f}")
    print(f"diameter [cm]: {extent.diameter:.4f}")
    print(f"chain reach a3+a4+d5 [cm]: {model.reach:.4f}")
    print(
        "note: the reference design quotes a work-area diameter of approximately 40 cm; "
        "the grip-tip reach computed here is "
        f"{extent.max_reach:.2f} cm, so the quoted figure matches the radius "
        "(or a wrist-point measurement) rather than the tip-to-tip diameter."
    )
    if args.out:
        print(f"wrote CSV: {args.out}")
    if args.ply:
        print(f"wrote PLY: {args.ply}")
    return 0


def cmd_simulate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    model = _load_model(args)
    try:
        with open(args.scenario, "r", encoding="utf-8") as fh:
            scenario = load_scenario(fh.read())
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    sim = simulator_from_scenario(model, scenario)
    if scenario.program is None:
        print("error: scenario does not name a program to run", file=sys.stderr)
        return 1
    try:
        sim.run_program_to_completion(scenario.program, dt=scenario.dt)
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        if args.log:
            with open(args.log, "w", encoding="utf-8") as fh:
                fh.write(events_to_jsonl(sim.events))
        return 1
    if args.log:
        with open(args.log, "w", encoding="utf-8") as fh:
            fh.write(events_to_jsonl(sim.events))
    print(f"program {scenario.program.value} completed at t={sim.clock:.2f} s")
    for obj in sim.scene:
        print(f"object {obj.id} (height {obj.height:g} cm): {obj.location.value}")
    if args.log:
        print(f"wrote event log: {args.log}")
    return 0


def cmd_serve(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if not 1 <= args.port <= 65535:
        parser.error("--port must be in 1..65535")
    model = _load_model(args)
    scenario = None
    if args.scenario:
        with open(args.scenario, "r", encoding="utf-8") as fh:
            scenario = load_scenario(fh.read())
    from armforge.service import run_server

    run_server(model, port=args.port, host=args.host, scenario=scenario)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="armforge",
        description="5-DOF sorting-arm toolkit: kinematics, statics, power and simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_json: bool = True) -> None:
        p.add_argument("--config", help="arm config JSON (falls back to ARMFORGE_CONFIG)")
        if with_json:
            p.add_argument("--json", action="store_true", help="machine-readable output")

    p_fk = sub.add_parser("fk", help="forward kinematics for five joint angles")
    p_fk.add_argument("--theta", required=True, help="t1,t2,t3,t4,t5 in degrees")
    add_common(p_fk)

    p_ik = sub.add_parser("ik", help="inverse kinematics for a Cartesian target")
    p_ik.add_argument("--target", required=True, help="x,y,z in cm")
    p_ik.add_argument("--psi", type=float, default=-90.0, help="grip pitch in degrees (default -90)")
    p_ik.add_argument("--branch", choices=["elbow-up", "elbow-down"], default="elbow-up")
    add_common(p_ik)

    p_tq = sub.add_parser("torque", help="static torque report or payload solve")
    p_tq.add_argument("--load", type=float, default=0.0, help="grip load in gf")
    p_tq.add_argument("--max-payload", action="store_true", help="solve for the maximum load")
    p_tq.add_argument(
        "--paper-offsets",
        action="store_true",
        help="use the reference zero-load torque table as intercepts",
    )
    add_common(p_tq)

    p_pb = sub.add_parser("power-budget", help="servo/logic rail current budget")
    add_common(p_pb)

    p_ws = sub.add_parser("workspace", help="sample the reachable workspace")
    p_ws.add_argument("--steps", type=int, default=25, help="grid steps per joint (>= 2)")
    p_ws.add_argument("--out", help="write the cloud as CSV")
    p_ws.add_argument("--ply", help="write the cloud as ASCII PLY")
    add_common(p_ws)

    p_sim = sub.add_parser("simulate", help="run a scenario headless")
    p_sim.add_argument("--scenario", required=True, help="scenario JSON file")
    p_sim.add_argument("--log", help="write the event log (JSON lines)")
    add_common(p_sim, with_json=False)

    p_srv = sub.add_parser("serve", help="serve the teleop API (and UI if built)")
    p_srv.add_argument("--port", type=int, default=8930)
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--scenario", help="preload a scenario JSON file")
    add_common(p_srv, with_json=False)

    return parser


_HANDLERS = {
    "fk": cmd_fk,
    "ik": cmd_ik,
    "torque": cmd_torque,
    "power-budget": cmd_power_budget,
    "workspace": cmd_workspace,
    "simulate": cmd_simulate,
    "serve": cmd_serve,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, parser)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
