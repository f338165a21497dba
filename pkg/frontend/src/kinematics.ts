// Client-side forward kinematics, re-implemented from the documented
// convention: each table row contributes
// Rot_z(theta + offset) * Trans_z(d) * Trans_x(a) * Rot_x(alpha).
// The server stays authoritative for all behavior; this exists only to
// draw the arm and is cross-checked against server tips in tests.

import type { ArmModelDoc } from "./types.js";

export type Vec3 = [number, number, number];
type Mat4 = number[]; // row-major 16

const DEG = Math.PI / 180;

function identity(): Mat4 {
  return [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1];
}

function multiply(a: Mat4, b: Mat4): Mat4 {
  const out = new Array(16).fill(0);
  for (let r = 0; r < 4; r++) {
    for (let c = 0; c < 4; c++) {
      let s = 0;
      for (let k = 0; k < 4; k++) s += a[r * 4 + k] * b[k * 4 + c];
      out[r * 4 + c] = s;
    }
  }
  return out;
}

function dhMatrix(a: number, alphaDeg: number, d: number, thetaDeg: number): Mat4 {
  const th = thetaDeg * DEG;
  const al = alphaDeg * DEG;
  const ct = Math.cos(th);
  const st = Math.sin(th);
  const ca = Math.cos(al);
  const sa = Math.sin(al);
  return [
    ct, -st * ca, st * sa, a * ct,
    st, ct * ca, -ct * sa, a * st,
    0, sa, ca, d,
    0, 0, 0, 1,
  ];
}

function translationOf(m: Mat4): Vec3 {
  return [m[3], m[7], m[11]];
}

/**
 * Frame origins along the chain: [base, shoulder, elbow, wrist, wrist
 * (roll frame), grip tip]. Drawing consumers can dedupe the zero-length
 * roll segment; the last entry is the grip tip.
 */
export function chainPoints(model: ArmModelDoc, joints: number[]): Vec3[] {
  const points: Vec3[] = [[0, 0, 0]];
  let t = identity();
  model.dh_table.forEach((row, i) => {
    t = multiply(t, dhMatrix(row.a, row.alpha, row.d, joints[i] + row.theta_offset));
    points.push(translationOf(t));
  });
  return points;
}

export function tipPosition(model: ArmModelDoc, joints: number[]): Vec3 {
  const pts = chainPoints(model, joints);
  return pts[pts.length - 1];
}

export function distance(a: Vec3, b: Vec3): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}
