/** Canvas and panel rendering. DOM-only; all logic lives in state.ts. */

import { MODES, type Mode } from "./messages.js";
import { buttonStates, groundedLegs, LEG_NAMES, type ConsoleState } from "./state.js";

const TRAIL_SCALE = 120; // pixels per meter
const ROBOT_RADIUS = 8;

export function drawTrail(canvas: HTMLCanvasElement, state: ConsoleState): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);

  const cx = canvas.width / 2;
  const cy = canvas.height / 2;
  const toPx = (x: number, y: number): [number, number] => [
    cx + x * TRAIL_SCALE,
    cy - y * TRAIL_SCALE, // +y is left of the robot; screen y grows downward
  ];

  ctx.strokeStyle = "#2d4f67";
  ctx.lineWidth = 1;
  ctx.beginPath();
  for (let gx = -10; gx <= 10; gx++) {
    const [px] = toPx(gx, 0);
    ctx.moveTo(px, 0);
    ctx.lineTo(px, canvas.height);
  }
  for (let gy = -10; gy <= 10; gy++) {
    const [, py] = toPx(0, gy);
    ctx.moveTo(0, py);
    ctx.lineTo(canvas.width, py);
  }
  ctx.stroke();

  if (state.trail.length > 1) {
    ctx.strokeStyle = "#7fd4a8";
    ctx.lineWidth = 2;
    ctx.beginPath();
    state.trail.forEach((p, i) => {
      const [px, py] = toPx(p.x, p.y);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.stroke();
  }

  const latest = state.latest;
  if (latest) {
    const [px, py] = toPx(latest.x, latest.y);
    ctx.fillStyle = "#f0c040";
    ctx.beginPath();
    ctx.arc(px, py, ROBOT_RADIUS, 0, 2 * Math.PI);
    ctx.fill();
    ctx.strokeStyle = "#1b2733";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(px, py);
    ctx.lineTo(
      px + ROBOT_RADIUS * 1.8 * Math.cos(latest.heading),
      py - ROBOT_RADIUS * 1.8 * Math.sin(latest.heading),
    );
    ctx.stroke();
  }
}

export function renderStance(container: HTMLElement, stanceMask: number | null): void {
  const grounded = stanceMask === null ? [] : groundedLegs(stanceMask);
  for (const name of LEG_NAMES) {
    const cell = container.querySelector(`[data-leg="${name}"]`);
    if (cell) cell.classList.toggle("grounded", grounded.includes(name));
  }
}

export function renderPanel(state: ConsoleState): void {
  const latest = state.latest;

  const status = document.getElementById("status");
  if (status) {
    status.textContent = state.connected ? "connected" : "disconnected";
    status.classList.toggle("ok", state.connected);
  }
  const warning = document.getElementById("warning");
  if (warning) warning.hidden = state.connected;

  const battery = document.getElementById("battery") as HTMLProgressElement | null;
  const batteryText = document.getElementById("battery-text");
  if (battery) battery.value = latest ? latest.battery_wh : 0;
  if (batteryText) {
    batteryText.textContent = latest ? `${latest.battery_wh.toFixed(3)} Wh` : "-";
  }

  const fields: [string, string][] = latest
    ? [
        ["t", latest.t.toFixed(2)],
        ["mode", latest.mode],
        ["pose", `${latest.x.toFixed(3)}, ${latest.y.toFixed(3)} m`],
        ["heading", `${latest.heading.toFixed(3)} rad`],
        [
          "margin",
          latest.stability_margin === null ? "none" : `${latest.stability_margin.toFixed(4)} m`,
        ],
        ["frames ok", String(latest.counters.frames_ok)],
        ["noise rejected", String(latest.counters.noise_rejected)],
        ["false accepts", String(latest.counters.false_accepts)],
        ["dropped", String(latest.counters.dropped)],
        ["command errors", String(latest.command_errors ?? 0)],
      ]
    : [];
  const list = document.getElementById("readout");
  if (list) {
    list.innerHTML = "";
    for (const [label, value] of fields) {
      const row = document.createElement("div");
      row.className = "row";
      row.textContent = `${label}: ${value}`;
      list.appendChild(row);
    }
  }

  const stance = document.getElementById("stance");
  if (stance) renderStance(stance, latest ? latest.stance_mask : null);

  const states = buttonStates(state);
  for (const mode of MODES) {
    const button = document.getElementById(`mode-${mode}`) as HTMLButtonElement | null;
    if (!button) continue;
    button.disabled = !state.connected;
    button.classList.toggle("active", states[mode as Mode]);
  }
}
