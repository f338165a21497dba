// UI state and the keyboard handling, kept free of DOM so tests can
// drive it directly. The rendered pose always comes from the latest
// snapshot; the client never predicts motion.

import { gripCommand, jogCommand } from "./commands.js";
import type { CommandPayload, StateSnapshot } from "./types.js";

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export interface UiState {
  connection: ConnectionStatus;
  snapshot: StateSnapshot | null;
  selectedServo: number; // 1..6 (6 = gripper)
  jogStepDeg: number;
}

export interface KeyOutcome {
  state: UiState;
  command?: CommandPayload;
  toast?: string;
}

export function initialUiState(): UiState {
  return {
    connection: "connecting",
    snapshot: null,
    selectedServo: 1,
    jogStepDeg: 5,
  };
}

export function applySnapshot(state: UiState, snapshot: StateSnapshot): UiState {
  return { ...state, connection: "connected", snapshot };
}

export function markDisconnected(state: UiState): UiState {
  return { ...state, connection: "disconnected" };
}

const PROGRAM_LOCK_TOAST = "program running: manual control is locked";

/**
 * Keyboard map: 1-6 select a servo, ArrowUp/ArrowDown jog the selected
 * servo by the step, g toggles the grip. Control keys are ignored with a
 * toast while a program runs; selection is always allowed.
 */
export function handleKey(state: UiState, key: string): KeyOutcome {
  if (key >= "1" && key <= "6") {
    return { state: { ...state, selectedServo: Number(key) } };
  }
  const isControlKey = key === "ArrowUp" || key === "ArrowDown" || key === "g";
  if (!isControlKey) {
    return { state };
  }
  if (state.snapshot === null || state.connection !== "connected") {
    return { state, toast: "not connected" };
  }
  if (state.snapshot.program !== null) {
    return { state, toast: PROGRAM_LOCK_TOAST };
  }
  if (key === "ArrowUp") {
    return { state, command: jogCommand(state.selectedServo, state.jogStepDeg) };
  }
  if (key === "ArrowDown") {
    return { state, command: jogCommand(state.selectedServo, -state.jogStepDeg) };
  }
  // g: toggle grip based on the latest snapshot's opening
  const action = state.snapshot.grip_opening > 0.5 ? "close" : "open";
  return { state, command: gripCommand(action) };
}

const PLACE_LABELS: Record<string, string> = {
  left_bucket: "placed left",
  right_bucket: "placed right",
  area_short: "placed on short area",
  area_tall: "placed on tall area",
  sorting_area: "returned to sorting area",
};

/**
 * One-line program status: the running phase while active, or the
 * terminal verdict reconstructed from the event log once finished.
 */
export function programSummary(snapshot: StateSnapshot): string | null {
  if (snapshot.program !== null) {
    return `${snapshot.program.program}: ${snapshot.program.phase}`;
  }
  let finished: string | null = null;
  let lastPlace: string | null = null;
  let sawClassification = false;
  let emptyVerdict = false;
  for (const event of snapshot.events) {
    if (event.kind === "program_started") {
      finished = null;
      lastPlace = null;
      sawClassification = false;
      emptyVerdict = false;
    } else if (event.kind === "classification") {
      sawClassification = true;
      emptyVerdict = event.detail["result"] === "empty";
    } else if (event.kind === "place") {
      lastPlace = String(event.detail["location"]);
    } else if (event.kind === "program_finished") {
      finished = String(event.detail["outcome"]);
    }
  }
  if (finished === null) {
    return null;
  }
  if (finished !== "completed") {
    return finished;
  }
  if (lastPlace !== null) {
    return PLACE_LABELS[lastPlace] ?? `placed: ${lastPlace}`;
  }
  if (sawClassification && emptyVerdict) {
    return "sorting area empty";
  }
  return "completed";
}

/** Ordered phase names seen in the log for the current/last program. */
export function phaseTimeline(snapshot: StateSnapshot): string[] {
  const phases: string[] = [];
  for (const event of snapshot.events) {
    if (event.kind === "program_started") {
      phases.length = 0;
    } else if (event.kind === "phase") {
      phases.push(String(event.detail["phase"]));
    }
  }
  return phases;
}
