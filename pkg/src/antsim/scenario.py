"""Scenario files: everything a reproducible run needs, as JSON.

A scenario pins the RNG seed, clocks, protocol settings, link
behaviour, robot parameters and the command script.  Loading is strict:
unknown keys and out-of-range values fail immediately, naming the
offending field, rather than surfacing as a confusing run later.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

from antsim.link import LinkConfig
from antsim.protocol import AlterationMap, CodecConfig, CommandMode
from antsim.receiver import DEFAULT_WATCHDOG_TIMEOUT
from antsim.robot import RobotParams, check_payload
from antsim.transmitter import TxConfig

DEFAULT_TICK = 0.001
DEFAULT_REPORT_INTERVAL = 0.05


class ScenarioError(ValueError):
    """A scenario file failed validation."""


@dataclass
class RxSettings:
    watchdog_timeout: float = DEFAULT_WATCHDOG_TIMEOUT
    compensate_alteration: bool = True


@dataclass
class Scenario:
    seed: int = 0
    duration: float = 10.0
    tick: float = DEFAULT_TICK
    report_interval: float = DEFAULT_REPORT_INTERVAL
    payload: float = 0.0
    codec: CodecConfig = field(default_factory=CodecConfig)
    link: LinkConfig = field(default_factory=LinkConfig)
    tx: TxConfig = field(default_factory=TxConfig)
    rx: RxSettings = field(default_factory=RxSettings)
    robot: RobotParams = field(default_factory=RobotParams)
    script: list[tuple[float, CommandMode]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ScenarioError("duration must be > 0")
        if self.tick <= 0:
            raise ScenarioError("tick must be > 0")
        if self.report_interval < self.tick:
            raise ScenarioError("report_interval must be >= tick")
        try:
            check_payload(self.payload, self.robot)
        except ValueError as exc:
            raise ScenarioError(f"payload: {exc}") from exc
        if self.tx.keepalive_enabled and not (
            self.tx.keepalive_period < self.link.noise_onset
        ):
            raise ScenarioError(
                "tx.keepalive_period must be below link.noise_onset or the "
                "receiver will hear noise between keepalives"
            )
        last_t = -1.0
        for i, (t, _mode) in enumerate(self.script):
            if t < 0 or t >= self.duration:
                raise ScenarioError(f"script[{i}] time {t} outside [0, duration)")
            if t < last_t:
                raise ScenarioError(f"script[{i}] times must be non-decreasing")
            last_t = t


def _take(section: dict[str, Any], name: str) -> dict[str, Any]:
    sub = section.pop(name, {})
    if not isinstance(sub, dict):
        raise ScenarioError(f"{name} must be an object")
    return sub


def _build(cls, raw: dict[str, Any], where: str, **extra):
    known = {f.name for f in fields(cls)}
    unknown = set(raw) - known
    if unknown:
        raise ScenarioError(f"unknown {where} field(s): {', '.join(sorted(unknown))}")
    try:
        return cls(**raw, **extra)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def scenario_from_dict(raw: dict[str, Any]) -> Scenario:
    """Build and validate a Scenario from parsed JSON; the input is not touched."""
    raw = copy.deepcopy(raw)

    codec = _build(CodecConfig, _take(raw, "codec"), "codec")

    link_raw = _take(raw, "link")
    if "seed" in link_raw:
        raise ScenarioError("link.seed is not a field; the top-level seed drives the link RNG")
    table = link_raw.pop("alteration", None)
    if table is not None and not isinstance(table, list):
        raise ScenarioError("link.alteration must be a 256-element array or null")
    try:
        alteration = AlterationMap(table)
    except ValueError as exc:
        raise ScenarioError(f"link.alteration: {exc}") from exc

    tx_raw = _take(raw, "tx")
    if "codec" in tx_raw:
        raise ScenarioError("tx.codec is not a field; use the top-level codec section")
    tx = _build(TxConfig, tx_raw, "tx", codec=codec)

    rx = _build(RxSettings, _take(raw, "rx"), "rx")
    robot = _build(RobotParams, _take(raw, "robot"), "robot")

    script_raw = raw.pop("script", [])
    script: list[tuple[float, CommandMode]] = []
    for i, entry in enumerate(script_raw):
        try:
            t, mode_name = entry
            script.append((float(t), CommandMode(mode_name)))
        except (ValueError, TypeError) as exc:
            raise ScenarioError(f"script[{i}]: {exc}") from exc

    seed = raw.pop("seed", 0)
    link = _build(LinkConfig, link_raw, "link", seed=seed, alteration=alteration)

    top = {
        "seed": seed,
        "duration": raw.pop("duration", 10.0),
        "tick": raw.pop("tick", DEFAULT_TICK),
        "report_interval": raw.pop("report_interval", DEFAULT_REPORT_INTERVAL),
        "payload": raw.pop("payload", 0.0),
    }
    if raw:
        raise ScenarioError(f"unknown scenario field(s): {', '.join(sorted(raw))}")
    return Scenario(codec=codec, link=link, tx=tx, rx=rx, robot=robot,
                    script=script, **top)


def load_scenario(path: str | Path, seed_override: int | None = None) -> Scenario:
    """Read a scenario JSON file; optionally replace its seed."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScenarioError(f"{path}: top level must be an object")
    if seed_override is not None:
        raw["seed"] = seed_override
    return scenario_from_dict(raw)
