/** Wire formats shared with the teleoperation service. */

export const MODES = ["forward", "backward", "left", "right", "stop"] as const;
export type Mode = (typeof MODES)[number];

export interface LinkCounters {
  sent: number;
  delivered: number;
  dropped: number;
  noise_emitted: number;
  frames_sent: number;
  frames_ok: number;
  noise_rejected: number;
  mode_changes: number;
  false_accepts: number;
}

export interface TelemetrySample {
  t: number;
  mode: Mode;
  x: number;
  y: number;
  heading: number;
  motor_left: number;
  motor_right: number;
  stance_mask: number;
  stance_count: number;
  stability_margin: number | null;
  battery_wh: number;
  counters: LinkCounters;
  command_errors?: number;
}

export function isMode(value: unknown): value is Mode {
  return typeof value === "string" && (MODES as readonly string[]).includes(value);
}

/** Exact JSON the service expects for a drive command. */
export function buildCommand(mode: Mode): string {
  return JSON.stringify({ type: "command", mode });
}

function isFiniteNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

const COUNTER_KEYS: (keyof LinkCounters)[] = [
  "sent",
  "delivered",
  "dropped",
  "noise_emitted",
  "frames_sent",
  "frames_ok",
  "noise_rejected",
  "mode_changes",
  "false_accepts",
];

/** Parse one telemetry message; null for anything malformed. */
export function parseTelemetry(text: string): TelemetrySample | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) return null;
  const obj = raw as Record<string, unknown>;

  for (const key of ["t", "x", "y", "heading", "motor_left", "motor_right", "battery_wh"]) {
    if (!isFiniteNumber(obj[key])) return null;
  }
  if (!isMode(obj.mode)) return null;
  const mask = obj.stance_mask;
  if (!Number.isInteger(mask) || (mask as number) < 0 || (mask as number) > 0b111111) return null;
  if (!Number.isInteger(obj.stance_count)) return null;
  if (obj.stability_margin !== null && !isFiniteNumber(obj.stability_margin)) return null;

  const counters = obj.counters;
  if (typeof counters !== "object" || counters === null) return null;
  for (const key of COUNTER_KEYS) {
    if (!isFiniteNumber((counters as Record<string, unknown>)[key])) return null;
  }

  return obj as unknown as TelemetrySample;
}
