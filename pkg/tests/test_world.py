"""End-to-end world runs: pipeline order, telemetry, determinism."""

import io
import json
import math

import pytest

from antsim.link import LinkConfig
from antsim.protocol import CommandMode
from antsim.scenario import Scenario, scenario_from_dict
from antsim.transmitter import TxConfig
from antsim.world import World, run_scenario


def forward_scenario(duration=10.0, **extra):
    raw = {"duration": duration, "script": [[0.0, "forward"]]}
    raw.update(extra)
    return scenario_from_dict(raw)


def run_world(scenario):
    world = World(scenario)
    buf = io.StringIO()
    summary = world.run(out=buf)
    samples = [json.loads(line) for line in buf.getvalue().splitlines()]
    return world, summary, samples


def test_forward_run_matches_lag_corrected_distance():
    world, summary, samples = run_world(forward_scenario())
    expected = 0.1 * (10.0 - 0.1 * (1 - math.exp(-100)))
    assert world.pose.x == pytest.approx(expected, abs=1e-9)
    assert world.pose.y == 0.0
    assert world.pose.heading == 0.0
    assert summary.distance_m == pytest.approx(world.pose.x, abs=1e-9)
    assert summary.final_mode == "forward"


def test_telemetry_cadence_and_fields():
    _world, summary, samples = run_world(forward_scenario())
    assert len(samples) == 200
    assert summary.telemetry_lines == 200
    assert samples[0]["t"] == pytest.approx(0.05)
    assert samples[-1]["t"] == pytest.approx(10.0)
    sample = samples[37]
    for key in ("t", "mode", "x", "y", "heading", "motor_left", "motor_right",
                "stance_mask", "stance_count", "stability_margin", "battery_wh",
                "counters"):
        assert key in sample
    for key in ("sent", "delivered", "dropped", "noise_emitted", "frames_sent",
                "frames_ok", "noise_rejected", "mode_changes", "false_accepts"):
        assert key in sample["counters"]
    # Finite numbers only; unstable margins would be null, not inf.
    assert all(
        s["stability_margin"] is None or math.isfinite(s["stability_margin"])
        for s in samples
    )


def test_mode_latches_between_commands():
    scenario = scenario_from_dict(
        {"duration": 3.0, "script": [[0.0, "forward"], [1.0, "left"], [2.0, "stop"]]}
    )
    _world, summary, samples = run_world(scenario)
    by_t = {round(s["t"], 3): s["mode"] for s in samples}
    assert by_t[0.5] == "forward"
    assert by_t[1.5] == "left"
    assert by_t[2.5] == "stop"
    assert summary.mode_changes == 3
    assert summary.frames_sent == 3
    assert summary.frames_ok == 3
    assert summary.false_accepts == 0


def test_stability_reported_during_walk():
    _world, _summary, samples = run_world(forward_scenario(duration=5.0))
    walking = [s for s in samples if s["t"] >= 1.0]
    assert all(s["stance_count"] == 3 for s in walking)
    assert all(s["stability_margin"] > 0.02 for s in walking)
    masks = {s["stance_mask"] for s in walking}
    assert masks == {0b010101, 0b101010}  # the two tripods alternate


def test_keepalives_hold_noise_at_zero():
    _world, summary, _lines = run_world(Scenario(duration=5.0))
    assert summary.noise_bytes == 0
    assert summary.noise_rejected == 0


def test_noise_starts_on_time_when_tx_silent():
    scenario = Scenario(duration=0.2, tx=TxConfig(keepalive_enabled=False))
    world = World(scenario)
    first_noise_t = None
    while world.tick_index < 200 and first_noise_t is None:
        tick_start = world.t
        world.step()
        if world.link.noise_emitted > 0:
            first_noise_t = tick_start
    assert first_noise_t is not None
    assert 0.075 <= first_noise_t <= 0.076 + 1e-9


def test_watchdog_stops_runaway_robot():
    # Radio silence after the antenna is pulled: noise disabled so no
    # chance keepalive can stall the watchdog (see receiver tests).
    scenario = scenario_from_dict(
        {"duration": 5.0, "link": {"noise_rate": 0.0}, "script": [[0.0, "forward"]]}
    )
    world = World(scenario)
    sever_t = stop_t = None
    while world.tick_index < 5000:
        world.step()
        if sever_t is None and world.t >= 2.0:
            world.link.cfg.distance = 1e9
            sever_t = world.t
        if sever_t is not None and stop_t is None and world.rx.current_mode is CommandMode.STOP:
            stop_t = world.t
    assert stop_t is not None
    # Last keepalive landed at 1.999 or 2.0; the stop follows half a
    # second after it, within a tick either way.
    assert stop_t - sever_t <= 0.5 + 2 * scenario.tick
    assert stop_t - sever_t >= 0.5 - 0.05 - 2 * scenario.tick
    assert world.rx.watchdog_stops == 1
    # The motors wind down; the pose freezes shortly after.
    assert abs(world.motor_left.actual_speed) < 1e-3


def test_disconnected_supervisor_triggers_watchdog():
    world = World(Scenario(duration=2.0, link=LinkConfig(noise_rate=0.0)))
    world.queue_command(CommandMode.FORWARD)
    for _ in range(500):
        world.step()
    assert world.rx.current_mode is CommandMode.FORWARD
    world.supervisor_connected = False
    for _ in range(600):
        world.step()
    assert world.rx.current_mode is CommandMode.STOP
    assert world.rx.watchdog_stops == 1


def test_battery_drains_and_forces_stop():
    scenario = scenario_from_dict(
        {
            "duration": 60.0,
            "tick": 0.01,
            "report_interval": 0.1,
            "robot": {"battery_capacity_wh": 0.9 * 30.0 / 3600.0},  # 30 s of drive
            "script": [[0.0, "forward"]],
        }
    )
    world, summary, samples = run_world(scenario)
    assert summary.final_battery_wh == 0.0
    zero_from = [s["t"] for s in samples if s["battery_wh"] == 0.0]
    assert zero_from and zero_from[0] == pytest.approx(30.0, abs=0.2)
    # Motors are forced off at empty: position stops growing.
    x_at = {round(s["t"], 3): s["x"] for s in samples}
    assert x_at[59.9] == pytest.approx(x_at[40.0], abs=1e-9)
    assert samples[-1]["mode"] == "forward"  # the latch keeps the last command


def test_false_accept_counter_on_noisy_silence():
    scenario = Scenario(duration=30.0, seed=123, tx=TxConfig(keepalive_enabled=False))
    _world, summary, _samples = run_world(scenario)
    assert summary.noise_bytes == pytest.approx(30_000, abs=100)
    assert summary.false_accepts <= 5
    assert summary.mode_changes <= 5


def test_determinism_byte_identical_telemetry():
    raw = {
        "seed": 2024,
        "duration": 4.0,
        "link": {"drop_prob": 0.2, "latency": 0.003},
        "script": [[0.1, "forward"], [1.7, "right"], [3.0, "stop"]],
    }
    buf_a, buf_b = io.StringIO(), io.StringIO()
    World(scenario_from_dict(raw)).run(out=buf_a)
    World(scenario_from_dict(raw)).run(out=buf_b)
    assert buf_a.getvalue() == buf_b.getvalue()
    assert len(buf_a.getvalue()) > 1000


def test_different_seed_changes_noisy_run():
    base = {"duration": 2.0, "tx": {"keepalive_enabled": False}}
    a = io.StringIO()
    b = io.StringIO()
    World(scenario_from_dict({**base, "seed": 1})).run(out=a)
    World(scenario_from_dict({**base, "seed": 2})).run(out=b)
    assert a.getvalue() != b.getvalue()


def test_run_scenario_writes_ndjson(tmp_path):
    out = tmp_path / "telemetry.ndjson"
    summary = run_scenario(forward_scenario(duration=1.0), out_path=out)
    lines = out.read_text().splitlines()
    assert len(lines) == summary.telemetry_lines == 20
    parsed = json.loads(lines[-1])
    assert parsed["mode"] == "forward"
    assert json.loads(summary.to_json())["ticks"] == 1000


def test_external_commands_equivalent_to_script():
    world = World(Scenario(duration=1.0))
    world.queue_command(CommandMode.BACKWARD)
    for _ in range(100):
        world.step()
    assert world.rx.current_mode is CommandMode.BACKWARD
    assert world.tx.frames_sent == 1
