/** Console bootstrap: socket wiring, buttons, keyboard. */

import { MODES, parseTelemetry, type Mode } from "./messages.js";
import { applySample, initialState, sendCommand, setConnected } from "./state.js";
import { drawTrail, renderPanel } from "./render.js";

const RECONNECT_DELAY_MS = 1000;

const KEY_MODES: Record<string, Mode> = {
  ArrowUp: "forward",
  ArrowDown: "backward",
  ArrowLeft: "left",
  ArrowRight: "right",
  " ": "stop",
};

function telemetryUrl(): string {
  const scheme = location.protocol === "https:" ? "wss:" : "ws:";
  return `${scheme}//${location.host}/ws`;
}

function main(): void {
  const state = initialState();
  const canvas = document.getElementById("trail") as HTMLCanvasElement;
  let socket: WebSocket | null = null;

  const repaint = (): void => {
    drawTrail(canvas, state);
    renderPanel(state);
  };

  const connect = (): void => {
    socket = new WebSocket(telemetryUrl());
    socket.onopen = () => {
      setConnected(state, true);
      repaint();
    };
    socket.onmessage = (event: MessageEvent) => {
      const sample = parseTelemetry(String(event.data));
      if (sample) {
        applySample(state, sample);
        repaint();
      }
    };
    socket.onclose = () => {
      setConnected(state, false);
      repaint();
      setTimeout(connect, RECONNECT_DELAY_MS);
    };
    socket.onerror = () => socket?.close();
  };

  for (const mode of MODES) {
    const button = document.getElementById(`mode-${mode}`);
    button?.addEventListener("click", () => sendCommand(state, socket, mode));
  }
  document.addEventListener("keydown", (event: KeyboardEvent) => {
    const mode = KEY_MODES[event.key];
    if (mode && sendCommand(state, socket, mode)) event.preventDefault();
  });

  repaint();
  connect();
}

document.addEventListener("DOMContentLoaded", main);
