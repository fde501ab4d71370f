"""Live teleoperation service: WebSocket control plus static console.

The service wraps a ``World`` and paces it against the wall clock, so a
browser drives the very same pipeline a batch run uses.  Clients send
command messages over ``/ws`` and receive telemetry samples; the page
under ``/`` is the operator console (served from a built frontend when
one is available, otherwise a bare fallback so the endpoint always
works).

Losing every client halts the supervisor transmitter, which starves the
receiver of keepalives and lets the robot's watchdog bring it to a
stop, exactly as a broken radio would.
"""

from __future__ import annotations

import asyncio
import contextlib
import json
import time
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from antsim.protocol import CommandMode
from antsim.scenario import Scenario
from antsim.world import World

BROADCAST_HZ = 20.0
# Never simulate more than this far in one pacing wakeup; a stalled event
# loop should drop sim time rather than freeze the service catching up.
MAX_CATCHUP_S = 1.0

FALLBACK_PAGE = """<!doctype html>
<html><head><title>antsim</title></head>
<body>
<h1>antsim teleop service</h1>
<p>No console build found. Build the frontend (see README) or talk to
<code>/ws</code> directly: send
<code>{"type":"command","mode":"forward"}</code> and read telemetry.</p>
</body></html>
"""


def default_live_scenario() -> Scenario:
    # Effectively unbounded: live worlds are stepped until shutdown.
    return Scenario(duration=7 * 24 * 3600.0)


class TeleopServer:
    """Owns the world, the client set and the pacing task."""

    def __init__(self, world: World, realtime: bool = True) -> None:
        self.world = world
        self.realtime = realtime
        self.clients: set[WebSocket] = set()
        self.command_errors = 0
        self._task: asyncio.Task | None = None
        self.app = self._build_app()

    def _build_app(self) -> FastAPI:
        @contextlib.asynccontextmanager
        async def lifespan(app: FastAPI):
            if self.realtime:
                self._task = asyncio.create_task(self._pace())
            yield
            if self._task is not None:
                self._task.cancel()
                with contextlib.suppress(asyncio.CancelledError):
                    await self._task

        app = FastAPI(lifespan=lifespan)
        app.state.server = self

        @app.websocket("/ws")
        async def ws_endpoint(ws: WebSocket) -> None:
            await ws.accept()
            self.clients.add(ws)
            self.world.supervisor_connected = True
            try:
                while True:
                    self._handle_message(await ws.receive_text())
            except WebSocketDisconnect:
                pass
            finally:
                self.clients.discard(ws)
                self.world.supervisor_connected = bool(self.clients)

        static_dir = _find_console_build()
        if static_dir is not None:
            app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")
        else:
            @app.get("/")
            async def index() -> HTMLResponse:
                return HTMLResponse(FALLBACK_PAGE)

        return app

    def _handle_message(self, text: str) -> None:
        """Apply one client message; anything malformed is counted, not fatal."""
        try:
            msg = json.loads(text)
            if msg["type"] != "command":
                raise ValueError(f"unknown message type {msg['type']!r}")
            mode = CommandMode(msg["mode"])
        except (ValueError, KeyError, TypeError):
            self.command_errors += 1
            return
        self.world.queue_command(mode)

    async def _pace(self) -> None:
        """Advance the world to wall time and broadcast at a fixed rate."""
        tick = self.world.scenario.tick
        origin = time.monotonic() - self.world.t
        while True:
            await asyncio.sleep(1.0 / BROADCAST_HZ)
            target = time.monotonic() - origin
            if target - self.world.t > MAX_CATCHUP_S:
                origin += (target - self.world.t) - MAX_CATCHUP_S
                target = self.world.t + MAX_CATCHUP_S
            while self.world.t + tick <= target:
                self.world.step()
            await self.broadcast()

    async def broadcast(self) -> None:
        sample = self.world.sample()
        sample["command_errors"] = self.command_errors
        payload = json.dumps(sample, separators=(",", ":"))
        for ws in list(self.clients):
            try:
                await ws.send_text(payload)
            except Exception:
                self.clients.discard(ws)
                self.world.supervisor_connected = bool(self.clients)


def _find_console_build() -> Path | None:
    """Locate the compiled operator console, if the frontend was built."""
    for candidate in (
        Path.cwd() / "frontend" / "dist",
        Path(__file__).resolve().parents[2] / "frontend" / "dist",
    ):
        if (candidate / "index.html").is_file():
            return candidate
    return None


def create_app(world: World | None = None, realtime: bool = True) -> FastAPI:
    if world is None:
        world = World(default_live_scenario())
    return TeleopServer(world, realtime=realtime).app


def serve(port: int = 8000, host: str = "127.0.0.1", world: World | None = None) -> None:
    """Blocking entry point used by the CLI."""
    import uvicorn

    uvicorn.run(create_app(world), host=host, port=port, log_level="info")
