// Wire types mirroring the armforge service JSON schemas.

export interface DHRowDoc {
  a: number;
  alpha: number;
  d: number;
  theta_offset: number;
  joint_index: number;
}

export interface ArmModelDoc {
  dh_table: DHRowDoc[];
  joint_limits: [number, number][];
  sensor: {
    K: number;
    d0: number;
    valid_range: [number, number];
    best_accuracy_band: [number, number];
    empty_area_distance: number;
    tall_threshold: number;
    noise_sigma: number;
  };
  [key: string]: unknown;
}

export interface SensorDoc {
  distance: number;
  voltage: number;
  in_valid_range: boolean;
  classification: "empty" | "short" | "tall";
}

export interface SceneObjectDoc {
  id: string;
  height: number;
  location: string;
}

export interface EventDoc {
  t: number;
  kind: string;
  detail: Record<string, unknown>;
}

export interface ProgramDoc {
  program: "op1" | "op2" | "op3";
  phase: string;
  started_at: number;
}

export interface StateSnapshot {
  clock: number;
  joints: [number, number, number, number, number];
  grip_opening: number;
  active_servo: number | null;
  sensor: SensorDoc;
  scene: SceneObjectDoc[];
  program: ProgramDoc | null;
  events: EventDoc[];
}

export type CommandPayload =
  | { type: "jog"; servo: number; delta: number }
  | { type: "set_joint_targets"; theta: number[]; grip_opening: number }
  | { type: "grip"; action: "open" | "close" }
  | { type: "run_program"; program: "op1" | "op2" | "op3" }
  | { type: "place_object"; height: number; id?: string }
  | { type: "reset" };

export interface CommandVerdict {
  accepted: boolean;
  reason?: string;
}
