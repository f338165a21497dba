// Builders for the exact command payloads the service documents.

import type { CommandPayload } from "./types.js";

export function jogCommand(servo: number, delta: number): CommandPayload {
  return { type: "jog", servo, delta };
}

export function gripCommand(action: "open" | "close"): CommandPayload {
  return { type: "grip", action };
}

export function runProgramCommand(program: "op1" | "op2" | "op3"): CommandPayload {
  return { type: "run_program", program };
}

export function placeObjectCommand(height: number): CommandPayload {
  return { type: "place_object", height };
}

export function resetCommand(): CommandPayload {
  return { type: "reset" };
}
