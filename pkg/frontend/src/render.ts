// Canvas stick figure and DOM panel rendering. All geometry comes from
// the latest snapshot via the client FK; nothing here mutates state.

import { chainPoints, type Vec3 } from "./kinematics.js";
import { phaseTimeline, programSummary, type UiState } from "./uistate.js";
import type { ArmModelDoc, EventDoc, StateSnapshot } from "./types.js";

const AZIMUTH = -35 * (Math.PI / 180);
const ELEVATION = 22 * (Math.PI / 180);

function projectSimple(p: Vec3, scale: number, cx: number, cy: number): [number, number] {
  // Orthographic view: rotate about z by the azimuth, then tilt.
  const xr = p[0] * Math.cos(AZIMUTH) - p[1] * Math.sin(AZIMUTH);
  const yr = p[0] * Math.sin(AZIMUTH) + p[1] * Math.cos(AZIMUTH);
  const sx = yr;
  const sy = p[2] * Math.cos(ELEVATION) + xr * Math.sin(ELEVATION);
  return [cx + sx * scale, cy - sy * scale];
}

export function drawArm(
  canvas: HTMLCanvasElement,
  model: ArmModelDoc,
  snapshot: StateSnapshot,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const scale = Math.min(width, height) / 110;
  const cx = width / 2;
  const cy = height * 0.72;

  // Table plane grid
  ctx.strokeStyle = "#273246";
  ctx.lineWidth = 1;
  for (let gx = -50; gx <= 50; gx += 10) {
    for (const [a, b] of [
      [[gx, -50, 0], [gx, 50, 0]],
      [[-50, gx, 0], [50, gx, 0]],
    ] as [Vec3, Vec3][]) {
      const pa = projectSimple(a, scale, cx, cy);
      const pb = projectSimple(b, scale, cx, cy);
      ctx.beginPath();
      ctx.moveTo(pa[0], pa[1]);
      ctx.lineTo(pb[0], pb[1]);
      ctx.stroke();
    }
  }

  const pts = chainPoints(model, snapshot.joints);
  // Row 4 shares its origin with row 3 (wrist); skip the duplicate.
  const segs: Vec3[] = [pts[0], pts[1], pts[2], pts[3], pts[5]];
  ctx.strokeStyle = "#7dd3fc";
  ctx.lineWidth = 4;
  ctx.lineJoin = "round";
  ctx.beginPath();
  segs.forEach((p, i) => {
    const [sx, sy] = projectSimple(p, scale, cx, cy);
    if (i === 0) ctx.moveTo(sx, sy);
    else ctx.lineTo(sx, sy);
  });
  ctx.stroke();

  segs.forEach((p, i) => {
    const [sx, sy] = projectSimple(p, scale, cx, cy);
    ctx.fillStyle = i === segs.length - 1 ? "#fbbf24" : "#e2e8f0";
    ctx.beginPath();
    ctx.arc(sx, sy, i === segs.length - 1 ? 6 : 4, 0, Math.PI * 2);
    ctx.fill();
  });

  // Grip jaws hint: a short bar at the tip sized by the opening
  const tip = projectSimple(segs[segs.length - 1], scale, cx, cy);
  const jaw = 3 + snapshot.grip_opening * 7;
  ctx.strokeStyle = "#fbbf24";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(tip[0] - jaw, tip[1] + 10);
  ctx.lineTo(tip[0] - jaw, tip[1]);
  ctx.moveTo(tip[0] + jaw, tip[1] + 10);
  ctx.lineTo(tip[0] + jaw, tip[1]);
  ctx.stroke();
}

export function renderGauge(el: HTMLElement, snapshot: StateSnapshot, model: ArmModelDoc): void {
  const { distance, classification, in_valid_range } = snapshot.sensor;
  const max = 20;
  const pct = Math.min(Math.max(distance / max, 0), 1) * 100;
  const tall = (model.sensor.tall_threshold / max) * 100;
  const empty = (model.sensor.empty_area_distance / max) * 100;
  const shown = distance > 99 ? ">99" : distance.toFixed(1);
  el.innerHTML = `
    <div class="gauge-bar">
      <div class="gauge-fill" style="width:${pct}%"></div>
      <div class="gauge-mark" style="left:${tall}%" title="tall threshold ${model.sensor.tall_threshold} cm"></div>
      <div class="gauge-mark empty" style="left:${empty}%" title="empty-area distance ${model.sensor.empty_area_distance} cm"></div>
    </div>
    <div class="gauge-row">
      <span>${shown} cm${in_valid_range ? "" : " (out of band)"}</span>
      <span class="badge badge-${classification}">${classification}</span>
    </div>`;
}

export function renderJointsPanel(el: HTMLElement, state: UiState): void {
  const snap = state.snapshot;
  if (!snap) return;
  const names = ["base", "shoulder", "elbow", "wrist", "roll"];
  const rows = snap.joints
    .map((angle, i) => {
      const servo = i + 1;
      const selected = servo === state.selectedServo ? " selected" : "";
      const moving = snap.active_servo === servo ? " &#9205;" : "";
      return `<div class="joint-row${selected}" data-servo="${servo}">
        <span>${servo} ${names[i]}</span><span>${angle.toFixed(1)}&deg;${moving}</span></div>`;
    })
    .join("");
  const gripSel = state.selectedServo === 6 ? " selected" : "";
  const gripMoving = snap.active_servo === 6 ? " &#9205;" : "";
  el.innerHTML =
    rows +
    `<div class="joint-row${gripSel}" data-servo="6">
      <span>6 grip</span><span>${(snap.grip_opening * 100).toFixed(0)}% open${gripMoving}</span></div>`;
}

export function renderScene(el: HTMLElement, snapshot: StateSnapshot): void {
  if (snapshot.scene.length === 0) {
    el.innerHTML = `<span class="muted">no objects</span>`;
    return;
  }
  el.innerHTML = snapshot.scene
    .map((o) => `<div>${o.id} &middot; ${o.height} cm &middot; ${o.location.replace("_", " ")}</div>`)
    .join("");
}

export function renderProgram(el: HTMLElement, snapshot: StateSnapshot): void {
  const summary = programSummary(snapshot);
  const timeline = phaseTimeline(snapshot);
  const phases = timeline.map((p, i) => {
    const current = snapshot.program !== null && i === timeline.length - 1;
    return `<span class="phase${current ? " current" : ""}">${p.replace(/_/g, " ")}</span>`;
  });
  el.innerHTML = `
    <div class="program-summary">${summary ?? "<span class='muted'>idle</span>"}</div>
    <div class="timeline">${phases.join("<span class='sep'>&rarr;</span>")}</div>`;
}

export function renderEvents(el: HTMLElement, events: EventDoc[]): void {
  el.innerHTML = events
    .slice(-14)
    .reverse()
    .map((e) => {
      const detail = Object.entries(e.detail)
        .map(([k, v]) => `${k}=${v}`)
        .join(" ");
      return `<div class="event"><span class="t">${e.t.toFixed(2)}</span> <b>${e.kind}</b> ${detail}</div>`;
    })
    .join("");
}

export function renderConnection(el: HTMLElement, state: UiState): void {
  el.className = `conn conn-${state.connection}`;
  el.textContent = state.connection;
}
