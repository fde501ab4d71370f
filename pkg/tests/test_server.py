"""Live teleoperation service: WebSocket commands, telemetry, disconnects.

These tests run the real pacing loop against the wall clock, so they
poll with generous deadlines instead of asserting at exact instants.
"""

import json
import time

import pytest
from fastapi.testclient import TestClient

from antsim.protocol import CommandMode
from antsim.scenario import scenario_from_dict
from antsim.server import TeleopServer, create_app
from antsim.world import World

# Radio silence after a disconnect (no idle noise): the watchdog timing
# is then deterministic instead of waiting out chance keepalive bytes.
LIVE_RAW = {"duration": 3600.0, "link": {"noise_rate": 0.0}}


def make_server(realtime=True):
    return TeleopServer(World(scenario_from_dict(LIVE_RAW)), realtime=realtime)


def recv_until(ws, predicate, attempts=100):
    for _ in range(attempts):
        sample = json.loads(ws.receive_text())
        if predicate(sample):
            return sample
    raise AssertionError("condition not met within the polling budget")


def test_index_page_always_served():
    with TestClient(make_server().app) as client:
        page = client.get("/")
        assert page.status_code == 200
        assert "html" in page.headers["content-type"]


def test_telemetry_flows_and_commands_apply():
    server = make_server()
    with TestClient(server.app) as client:
        with client.websocket_connect("/ws") as ws:
            first = json.loads(ws.receive_text())
            assert first["mode"] == "stop"
            assert "counters" in first and "battery_wh" in first
            ws.send_text(json.dumps({"type": "command", "mode": "forward"}))
            moved = recv_until(ws, lambda s: s["mode"] == "forward")
            assert moved["counters"]["frames_ok"] >= 1
            # And back to a stop on request.
            ws.send_text(json.dumps({"type": "command", "mode": "stop"}))
            recv_until(ws, lambda s: s["mode"] == "stop")


def test_malformed_messages_counted_not_fatal():
    server = make_server()
    with TestClient(server.app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            ws.send_text("not json at all")
            ws.send_text(json.dumps({"type": "command", "mode": "warp"}))
            ws.send_text(json.dumps({"type": "telemetry"}))
            ws.send_text(json.dumps([1, 2, 3]))
            sample = recv_until(ws, lambda s: s["command_errors"] >= 4)
            assert sample["mode"] == "stop"
            assert server.command_errors == 4


def test_disconnect_halts_tx_and_watchdog_stops():
    server = make_server()
    with TestClient(server.app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.send_text(json.dumps({"type": "command", "mode": "forward"}))
            recv_until(ws, lambda s: s["mode"] == "forward")
        # Client gone: the supervisor goes quiet and the robot's own
        # watchdog must bring it to a stop about half a second later.
        assert server.world.supervisor_connected is False
        time.sleep(0.9)
        with client.websocket_connect("/ws") as ws:
            sample = recv_until(ws, lambda s: s["mode"] == "stop", attempts=20)
            assert sample["counters"]["mode_changes"] >= 2
    assert server.world.rx.watchdog_stops >= 1


def test_manual_stepping_without_realtime_loop():
    # No pacing task: the caller owns the clock, as a batch run does.
    server = make_server(realtime=False)
    world = server.world
    with TestClient(server.app) as client:
        with client.websocket_connect("/ws") as ws:
            ws.send_text(json.dumps({"type": "command", "mode": "left"}))
            # Give the server loop a beat to consume the message, then
            # step while the supervisor is still connected.
            deadline = time.monotonic() + 2.0
            while not world._external and time.monotonic() < deadline:
                time.sleep(0.01)
            for _ in range(100):
                world.step()
    assert world.rx.current_mode is CommandMode.TURN_LEFT
    assert world.tx.frames_sent == 1


def test_create_app_default_world():
    app = create_app(realtime=False)
    assert app.state.server.world.scenario.duration > 3600
