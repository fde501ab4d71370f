/** Console state: latest telemetry, pose trail, connection flag. */

import { buildCommand, MODES, type Mode, type TelemetrySample } from "./messages.js";

export const TRAIL_LIMIT = 2000;

/** Leg names in stance_mask bit order (bit 0 = LF). */
export const LEG_NAMES = ["LF", "LM", "LR", "RF", "RM", "RR"] as const;

export interface TrailPoint {
  x: number;
  y: number;
}

export interface ConsoleState {
  connected: boolean;
  latest: TelemetrySample | null;
  trail: TrailPoint[];
}

export function initialState(): ConsoleState {
  return { connected: false, latest: null, trail: [] };
}

/** Record a sample; the trail keeps at most TRAIL_LIMIT recent points. */
export function applySample(state: ConsoleState, sample: TelemetrySample): void {
  state.latest = sample;
  state.trail.push({ x: sample.x, y: sample.y });
  if (state.trail.length > TRAIL_LIMIT) {
    state.trail.splice(0, state.trail.length - TRAIL_LIMIT);
  }
}

export function setConnected(state: ConsoleState, connected: boolean): void {
  state.connected = connected;
  if (!connected) state.latest = null;
}

/** Legs on the ground for a stance bitmask. */
export function groundedLegs(stanceMask: number): string[] {
  return LEG_NAMES.filter((_, i) => (stanceMask >> i) & 1);
}

/** Which mode button should highlight: the robot's reported mode, or none. */
export function activeMode(state: ConsoleState): Mode | null {
  return state.connected && state.latest ? state.latest.mode : null;
}

export function buttonStates(state: ConsoleState): Record<Mode, boolean> {
  const active = activeMode(state);
  const out = {} as Record<Mode, boolean>;
  for (const mode of MODES) out[mode] = mode === active;
  return out;
}

/** Minimal surface of a WebSocket the sender needs. */
export interface CommandSocket {
  readyState: number;
  send(data: string): void;
}

const SOCKET_OPEN = 1;

/** Send a command if the console is connected; report whether it went out. */
export function sendCommand(
  state: ConsoleState,
  socket: CommandSocket | null,
  mode: Mode,
): boolean {
  if (!state.connected || socket === null || socket.readyState !== SOCKET_OPEN) {
    return false;
  }
  socket.send(buildCommand(mode));
  return true;
}
