// A scripted op2 session (short object) replayed through the UI state:
// the program timeline must advance and terminate in "placed left".

import { describe, expect, it } from "vitest";

import { applySnapshot, initialUiState, phaseTimeline, programSummary } from "../src/uistate.js";
import type { StateSnapshot } from "../src/types.js";
import session from "./fixtures/op2_session.json";

const frames = session.frames.map((f) => f.snapshot as unknown as StateSnapshot);

describe("scripted op2 session", () => {
  it("streams monotonically increasing clocks", () => {
    const clocks = frames.map((f) => f.clock);
    const sorted = [...clocks].sort((a, b) => a - b);
    expect(clocks).toEqual(sorted);
  });

  it("advances through the expected phases", () => {
    let state = initialUiState();
    const seen = new Set<string>();
    for (const frame of frames) {
      state = applySnapshot(state, frame);
      for (const phase of phaseTimeline(frame)) seen.add(phase);
    }
    for (const phase of ["move_to_measure", "measure", "move_to_pick", "grip_close", "move_to_dest", "release"]) {
      expect(seen, phase).toContain(phase);
    }
  });

  it("shows the running phase mid-run and 'placed left' at the end", () => {
    let state = initialUiState();
    const summaries: (string | null)[] = [];
    for (const frame of frames) {
      state = applySnapshot(state, frame);
      summaries.push(programSummary(state.snapshot!));
    }
    expect(summaries.some((s) => s?.startsWith("op2:"))).toBe(true);
    expect(summaries[summaries.length - 1]).toBe("placed left");
    // The rendered pose comes from the last snapshot, never prediction.
    expect(state.snapshot!.scene).toEqual([
      { id: "obj1", height: 2.0, location: "left_bucket" },
    ]);
  });

  it("classified the short object before picking", () => {
    const last = frames[frames.length - 1];
    const kinds = last.events.map((e) => e.kind);
    const classification = last.events.find((e) => e.kind === "classification");
    expect(classification?.detail["result"]).toBe("short");
    expect(kinds.indexOf("classification")).toBeLessThan(kinds.indexOf("pick"));
  });
});
