"""HTTP/WebSocket layer exposing the simulator to clients.

One owner thread runs the simulation tick loop; network handlers talk to
it only through a command queue and a snapshot mailbox, so no endpoint
ever blocks or races the loop. Commands are applied in arrival order on
the next tick and their verdicts are relayed back to the caller.

Endpoints:
    GET  /api/state    -> latest StateSnapshot JSON
    GET  /api/model    -> arm model JSON (config-schema shape)
    POST /api/command  -> {"accepted": bool, "reason"?: str}
    WS   /api/stream   -> StateSnapshot frames (interval_ms query param)

When a built teleop frontend is present next to the package it is served
at /.
"""

from __future__ import annotations

import asyncio
import json
import queue
import threading
import time
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from armforge.kinematics import JointState
from armforge.model import ArmModel, model_to_dict
from armforge.sim import (
    DEFAULT_DT,
    Command,
    Grip,
    Jog,
    PlaceObject,
    Program,
    Reset,
    RunProgram,
    Scenario,
    SetJointTargets,
    Simulator,
    simulator_from_scenario,
)

DEFAULT_PORT = 8930
MIN_STREAM_INTERVAL_MS = 10


class CommandSchemaError(ValueError):
    """Command body does not match the documented schema."""


def parse_command(body: Any) -> Command:
    """Decode a JSON command body; errors name the offending field."""
    if not isinstance(body, dict):
        raise CommandSchemaError("command: expected a JSON object")
    ctype = body.get("type")
    if ctype == "jog":
        servo = body.get("servo")
        delta = body.get("delta")
        if not isinstance(servo, int) or isinstance(servo, bool):
            raise CommandSchemaError("command.servo: expected an integer")
        if not isinstance(delta, (int, float)):
            raise CommandSchemaError("command.delta: expected a number")
        return Jog(servo=servo, delta_deg=float(delta))
    if ctype == "set_joint_targets":
        theta = body.get("theta")
        if not isinstance(theta, list) or len(theta) != 5 or not all(isinstance(v, (int, float)) for v in theta):
            raise CommandSchemaError("command.theta: expected a list of 5 numbers")
        grip = body.get("grip_opening", 1.0)
        if not isinstance(grip, (int, float)):
            raise CommandSchemaError("command.grip_opening: expected a number")
        return SetJointTargets(JointState(theta=tuple(float(v) for v in theta), grip_opening=float(grip)))
    if ctype == "grip":
        action = body.get("action")
        if action not in ("open", "close"):
            raise CommandSchemaError("command.action: expected 'open' or 'close'")
        return Grip(action=action)
    if ctype == "run_program":
        name = body.get("program")
        try:
            program = Program(name)
        except ValueError:
            raise CommandSchemaError("command.program: expected 'op1', 'op2' or 'op3'") from None
        return RunProgram(program)
    if ctype == "place_object":
        height = body.get("height")
        if not isinstance(height, (int, float)):
            raise CommandSchemaError("command.height: expected a number")
        obj_id = body.get("id")
        if obj_id is not None and not isinstance(obj_id, str):
            raise CommandSchemaError("command.id: expected a string")
        return PlaceObject(height=float(height), object_id=obj_id)
    if ctype == "reset":
        return Reset()
    raise CommandSchemaError(f"command.type: unknown type {ctype!r}")


class SimService:
    """Owns the simulator and the fixed-rate tick loop."""

    def __init__(
        self,
        model: ArmModel,
        scenario: Optional[Scenario] = None,
        dt: float = DEFAULT_DT,
        realtime: bool = True,
    ):
        self.model = model
        self.dt = dt
        self.realtime = realtime
        if scenario is not None:
            self.sim = simulator_from_scenario(model, scenario)
            self._pending_program = scenario.program
        else:
            self.sim = Simulator(model)
            self._pending_program = None
        self._commands: "queue.Queue[tuple[Command, queue.Queue]]" = queue.Queue()
        self._snapshot = self.sim.snapshot()
        self._lock = threading.Lock()
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None

    # -- lifecycle --

    def start(self) -> None:
        if self._thread is not None:
            return
        self._thread = threading.Thread(target=self._loop, name="armforge-sim", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5.0)
            self._thread = None

    def _loop(self) -> None:
        if self._pending_program is not None:
            self.sim.submit_command(RunProgram(self._pending_program))
            self._pending_program = None
        next_tick = time.monotonic()
        while not self._stop.is_set():
            while True:
                try:
                    cmd, reply = self._commands.get_nowait()
                except queue.Empty:
                    break
                reply.put(self.sim.submit_command(cmd))
            self.sim.step(self.dt)
            with self._lock:
                self._snapshot = self.sim.snapshot()
            if self.realtime:
                next_tick += self.dt
                delay = next_tick - time.monotonic()
                if delay > 0:
                    time.sleep(delay)
                else:
                    next_tick = time.monotonic()

    # -- handler-side API --

    def get_state(self) -> dict[str, Any]:
        with self._lock:
            return self._snapshot

    def post_command(self, cmd: Command, timeout: float = 5.0) -> tuple[bool, Optional[str]]:
        reply: "queue.Queue" = queue.Queue(maxsize=1)
        self._commands.put((cmd, reply))
        try:
            result = reply.get(timeout=timeout)
        except queue.Empty:
            return False, "simulator did not answer in time"
        return result.accepted, result.reason


def create_app(service: SimService, frontend_dir: Optional[Path] = None) -> FastAPI:
    from contextlib import asynccontextmanager

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        service.start()
        try:
            yield
        finally:
            service.stop()

    app = FastAPI(title="armforge teleop service", lifespan=lifespan)

    @app.get("/api/state")
    def get_state() -> JSONResponse:
        return JSONResponse(service.get_state())

    @app.get("/api/model")
    def get_model() -> JSONResponse:
        return JSONResponse(model_to_dict(service.model))

    @app.post("/api/command")
    async def post_command(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"accepted": False, "reason": "command: body is not valid JSON"})
        try:
            cmd = parse_command(body)
        except CommandSchemaError as e:
            return JSONResponse({"accepted": False, "reason": str(e)})
        accepted, reason = await asyncio.to_thread(service.post_command, cmd)
        payload: dict[str, Any] = {"accepted": accepted}
        if reason is not None:
            payload["reason"] = reason
        return JSONResponse(payload)

    @app.websocket("/api/stream")
    async def stream(ws: WebSocket, interval_ms: int = 50) -> None:
        await ws.accept()
        if interval_ms < MIN_STREAM_INTERVAL_MS:
            await ws.send_text(
                json.dumps({"error": f"interval_ms must be >= {MIN_STREAM_INTERVAL_MS}"})
            )
            await ws.close(code=1008)
            return
        last_clock = -1.0
        try:
            while True:
                snap = service.get_state()
                # Best-effort cadence, but the clock a client sees is
                # strictly increasing.
                if snap["clock"] > last_clock:
                    last_clock = snap["clock"]
                    await ws.send_text(json.dumps(snap, sort_keys=True))
                await asyncio.sleep(interval_ms / 1000.0)
        except WebSocketDisconnect:
            return

    if frontend_dir is None:
        frontend_dir = Path(__file__).resolve().parents[2] / "frontend"
    if (frontend_dir / "index.html").exists():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")

    return app


def run_server(
    model: ArmModel,
    port: int = DEFAULT_PORT,
    host: str = "127.0.0.1",
    scenario: Optional[Scenario] = None,
) -> None:
    """Blocking entry point used by the CLI's serve subcommand."""
    import uvicorn

    service = SimService(model, scenario=scenario)
    app = create_app(service)
    uvicorn.run(app, host=host, port=port, log_level="warning")
