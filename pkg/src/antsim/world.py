"""Fixed-step simulation world tying the pipeline together.

Each tick runs the full chain in transmission order: supervisor step,
link transport, receiver parsing, watchdog, drive train, pose and
battery.  The same ``World.step`` drives both batch runs (as fast as
the host allows) and the live service (paced by wall clock); only the
caller's clock differs, so batch and live behaviour cannot drift apart.

Telemetry is NDJSON, one sample per reporting interval.  Runs are fully
determined by the scenario plus its seed; identical inputs produce
byte-identical telemetry.
"""

from __future__ import annotations

import json
import math
import time
from collections import deque
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import IO

from antsim.link import TIME_EPS, Link
from antsim.protocol import AlterationMap, CommandMode
from antsim.receiver import Receiver
from antsim.robot import (
    MotorState,
    Pose,
    battery_step,
    default_legs,
    integrate_pose,
    leg_stance,
    mode_to_motor_commands,
    motor_step,
    motor_travel,
    stability_margin,
    stance_feet,
    stance_mask,
)
from antsim.scenario import Scenario
from antsim.transmitter import Transmitter


@dataclass
class RunSummary:
    duration: float
    ticks: int
    distance_m: float
    heading_change_rad: float
    frames_sent: int
    frames_ok: int
    false_accepts: int
    noise_bytes: int
    noise_rejected: int
    mode_changes: int
    watchdog_stops: int
    final_mode: str
    final_battery_wh: float
    telemetry_lines: int
    wall_seconds: float

    def to_json(self) -> str:
        return json.dumps(asdict(self))


class World:
    """One robot, one link, one supervisor, advanced a tick at a time."""

    def __init__(self, scenario: Scenario) -> None:
        self.scenario = scenario
        self.params = scenario.robot
        self.tx = Transmitter(scenario.tx)
        self.link = Link(scenario.link)
        rx_map = (
            scenario.link.alteration
            if scenario.rx.compensate_alteration
            else AlterationMap.identity()
        )
        self.rx = Receiver(
            scenario.codec,
            alteration=rx_map,
            watchdog_timeout=scenario.rx.watchdog_timeout,
        )
        self.motor_left = MotorState()
        self.motor_right = MotorState()
        self.pose = Pose()
        self.legs = default_legs(self.params)
        self.battery_wh = self.params.battery_capacity_wh
        self.distance_m = 0.0
        self.heading_change_rad = 0.0
        self.tick_index = 0
        self.supervisor_connected = True
        self._script = deque(scenario.script)
        self._external: deque[CommandMode] = deque()
        self._report_every = max(1, round(scenario.report_interval / scenario.tick))

    @property
    def t(self) -> float:
        """Start time of the tick about to run."""
        return self.tick_index * self.scenario.tick

    def queue_command(self, mode: CommandMode) -> None:
        """Hand the supervisor a command; it is sent on the next tick."""
        self._external.append(mode)

    def step(self) -> None:
        """Advance the whole pipeline by one tick."""
        t = self.t
        dt = self.scenario.tick

        if self.supervisor_connected:
            while self._script and self._script[0][0] <= t + TIME_EPS:
                self.tx.command(self._script.popleft()[1], t)
            while self._external:
                self.tx.command(self._external.popleft(), t)
            outbound = self.tx.step(t)
            if outbound:
                self.link.send(outbound, t)

        for when, byte in self.link.step(t):
            self.rx.ingest(byte, when)
        self.rx.watchdog(t)

        u_left, u_right = mode_to_motor_commands(self.rx.current_mode, self.params.v_max)
        if self.battery_wh <= 0.0:
            u_left, u_right = 0.0, 0.0

        before_left, before_right = self.motor_left, self.motor_right
        self.motor_left = motor_step(before_left, u_left, dt, self.params)
        self.motor_right = motor_step(before_right, u_right, dt, self.params)
        travel_left = motor_travel(before_left, self.motor_left, dt, self.params)
        travel_right = motor_travel(before_right, self.motor_right, dt, self.params)

        # Tick-average velocities keep pose integration consistent with the
        # exact motor response even through command transients.
        v = (travel_left + travel_right) / (2.0 * dt)
        omega = (travel_right - travel_left) / (self.params.track * dt)
        self.pose = integrate_pose(self.pose, v, omega, dt)
        self.distance_m += abs(travel_left + travel_right) / 2.0
        self.heading_change_rad += abs(travel_right - travel_left) / self.params.track

        moving = u_left != 0.0 or u_right != 0.0
        self.battery_wh = battery_step(self.battery_wh, moving, dt, self.params)
        self.tick_index += 1

    @property
    def due_for_report(self) -> bool:
        return self.tick_index % self._report_every == 0

    def sample(self) -> dict:
        """Snapshot the observable state as one telemetry record."""
        stance = leg_stance(
            self.legs, self.motor_left.shaft_angle, self.motor_right.shaft_angle
        )
        feet = stance_feet(self.legs, stance, self.params)
        margin = stability_margin(feet, self.params.com[:2])
        return {
            "t": self.t,
            "mode": self.rx.current_mode.value,
            "x": self.pose.x,
            "y": self.pose.y,
            "heading": self.pose.heading,
            "motor_left": self.motor_left.actual_speed,
            "motor_right": self.motor_right.actual_speed,
            "stance_mask": stance_mask(stance),
            "stance_count": sum(stance),
            "stability_margin": margin if math.isfinite(margin) else None,
            "battery_wh": self.battery_wh,
            "counters": {
                "sent": self.link.sent,
                "delivered": self.link.delivered,
                "dropped": self.link.dropped,
                "noise_emitted": self.link.noise_emitted,
                "frames_sent": self.tx.frames_sent,
                "frames_ok": self.rx.frames_ok,
                "noise_rejected": self.rx.noise_rejected,
                "mode_changes": self.rx.mode_changes,
                "false_accepts": self.false_accepts,
            },
        }

    @property
    def false_accepts(self) -> int:
        """Frames decoded beyond what the supervisor ever sent.

        Exact on a lossless link; with drops it is a lower bound, since a
        chance noise frame can hide behind a genuinely lost one.
        """
        return max(0, self.rx.frames_ok - self.tx.frames_sent)

    def run(self, out: IO[str] | None = None) -> RunSummary:
        """Run the scenario to completion, streaming telemetry to ``out``."""
        started = time.perf_counter()
        total_ticks = round(self.scenario.duration / self.scenario.tick)
        lines = 0
        while self.tick_index < total_ticks:
            self.step()
            if self.due_for_report:
                lines += 1
                if out is not None:
                    out.write(json.dumps(self.sample(), separators=(",", ":")))
                    out.write("\n")
        return RunSummary(
            duration=self.scenario.duration,
            ticks=total_ticks,
            distance_m=self.distance_m,
            heading_change_rad=self.heading_change_rad,
            frames_sent=self.tx.frames_sent,
            frames_ok=self.rx.frames_ok,
            false_accepts=self.false_accepts,
            noise_bytes=self.link.noise_emitted,
            noise_rejected=self.rx.noise_rejected,
            mode_changes=self.rx.mode_changes,
            watchdog_stops=self.rx.watchdog_stops,
            final_mode=self.rx.current_mode.value,
            final_battery_wh=self.battery_wh,
            telemetry_lines=lines,
            wall_seconds=time.perf_counter() - started,
        )


def run_scenario(scenario: Scenario, out_path: str | Path | None = None) -> RunSummary:
    """Convenience wrapper: build a world, run it, write NDJSON telemetry."""
    world = World(scenario)
    if out_path is None:
        return world.run(out=None)
    with open(out_path, "w", encoding="utf-8") as fh:
        return world.run(out=fh)
