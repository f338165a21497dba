// Entry point: wires the snapshot stream, keyboard and buttons to the
// service. The server is the single source of truth; every render frame
// comes straight from the latest snapshot.

import { placeObjectCommand, resetCommand, runProgramCommand } from "./commands.js";
import {
  drawArm,
  renderConnection,
  renderEvents,
  renderGauge,
  renderJointsPanel,
  renderProgram,
  renderScene,
} from "./render.js";
import {
  applySnapshot,
  handleKey,
  initialUiState,
  markDisconnected,
  type UiState,
} from "./uistate.js";
import type { ArmModelDoc, CommandPayload, CommandVerdict, StateSnapshot } from "./types.js";

let state: UiState = initialUiState();
let model: ArmModelDoc | null = null;

const $ = (id: string) => document.getElementById(id) as HTMLElement;

function toast(message: string): void {
  const host = $("toasts");
  const node = document.createElement("div");
  node.className = "toast";
  node.textContent = message;
  host.appendChild(node);
  setTimeout(() => node.remove(), 3500);
}

async function postCommand(command: CommandPayload): Promise<void> {
  try {
    const res = await fetch("/api/command", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(command),
    });
    const verdict = (await res.json()) as CommandVerdict;
    if (!verdict.accepted) {
      toast(verdict.reason ?? "command rejected");
    }
  } catch {
    toast("command failed: server unreachable");
  }
}

function render(): void {
  renderConnection($("connection"), state);
  const snap = state.snapshot;
  if (!snap || !model) return;
  drawArm($("arm-canvas") as HTMLCanvasElement, model, snap);
  renderGauge($("gauge"), snap, model);
  renderJointsPanel($("joints"), state);
  renderScene($("scene"), snap);
  renderProgram($("program"), snap);
  renderEvents($("events"), snap.events);
}

function connectStream(): void {
  const proto = location.protocol === "https:" ? "wss" : "ws";
  const ws = new WebSocket(`${proto}://${location.host}/api/stream?interval_ms=50`);
  ws.onmessage = (event: MessageEvent) => {
    const snap = JSON.parse(event.data) as StateSnapshot;
    state = applySnapshot(state, snap);
    requestAnimationFrame(render);
  };
  ws.onclose = () => {
    state = markDisconnected(state);
    render();
    setTimeout(connectStream, 1000); // retry loop; resyncs from the next snapshot
  };
  ws.onerror = () => ws.close();
}

async function loadModel(): Promise<void> {
  try {
    const res = await fetch("/api/model");
    model = (await res.json()) as ArmModelDoc;
  } catch {
    setTimeout(loadModel, 1000);
  }
}

function onKey(event: KeyboardEvent): void {
  if (event.target instanceof HTMLInputElement) return;
  const outcome = handleKey(state, event.key);
  state = outcome.state;
  if (outcome.toast) toast(outcome.toast);
  if (outcome.command) void postCommand(outcome.command);
  if (outcome.command || "123456".includes(event.key)) {
    event.preventDefault();
    render();
  }
}

function wireButtons(): void {
  for (const program of ["op1", "op2", "op3"] as const) {
    $(`run-${program}`).addEventListener("click", () => void postCommand(runProgramCommand(program)));
  }
  $("place-object").addEventListener("click", () => {
    const input = $("object-height") as HTMLInputElement;
    const height = Number(input.value);
    if (!Number.isFinite(height) || height <= 0) {
      toast("object height must be a positive number");
      return;
    }
    void postCommand(placeObjectCommand(height));
  });
  $("reset").addEventListener("click", () => void postCommand(resetCommand()));
  $("jog-plus").addEventListener("click", () => onKey(new KeyboardEvent("keydown", { key: "ArrowUp" })));
  $("jog-minus").addEventListener("click", () => onKey(new KeyboardEvent("keydown", { key: "ArrowDown" })));
  $("grip-toggle").addEventListener("click", () => onKey(new KeyboardEvent("keydown", { key: "g" })));
  $("joints").addEventListener("click", (event) => {
    const row = (event.target as HTMLElement).closest<HTMLElement>(".joint-row");
    if (row?.dataset.servo) {
      state = { ...state, selectedServo: Number(row.dataset.servo) };
      render();
    }
  });
}

document.addEventListener("keydown", onKey);
void loadModel().then(() => {
  wireButtons();
  connectStream();
});
