"""Command-line interface: run, fuzz, and argument handling."""

import json
import subprocess
import sys

import pytest

from antsim.cli import main

FORWARD_SCENARIO = {
    "seed": 5,
    "duration": 2.0,
    "script": [[0.0, "forward"], [1.5, "stop"]],
}


def write_scenario(tmp_path, raw):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(raw))
    return path


def test_run_writes_telemetry_and_summary(tmp_path, capsys):
    scenario = write_scenario(tmp_path, FORWARD_SCENARIO)
    out = tmp_path / "telemetry.ndjson"
    code = main(["run", "--scenario", str(scenario), "--out", str(out)])
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["ticks"] == 2000
    assert summary["frames_sent"] == 2
    assert 0.04 < summary["distance_m"] < 0.16
    assert len(out.read_text().splitlines()) == summary["telemetry_lines"] == 40


def test_run_seed_override_changes_noise(tmp_path, capsys):
    raw = {"duration": 1.0, "tx": {"keepalive_enabled": False}}
    scenario = write_scenario(tmp_path, raw)
    outputs = []
    for seed in (1, 2):
        out = tmp_path / f"t{seed}.ndjson"
        assert main(["run", "--scenario", str(scenario), "--seed", str(seed),
                     "--out", str(out)]) == 0
        capsys.readouterr()
        outputs.append(out.read_text())
    assert outputs[0] != outputs[1]


def test_run_rejects_bad_scenario(tmp_path, capsys):
    scenario = write_scenario(tmp_path, {"payload": 0.2})
    code = main(["run", "--scenario", str(scenario), "--out", str(tmp_path / "o")])
    assert code == 2
    assert "payload" in capsys.readouterr().err


def test_run_missing_file_fails_cleanly(tmp_path, capsys):
    code = main(["run", "--scenario", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path / "o")])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_fuzz_reports_noise_stats(capsys):
    code = main(["fuzz", "--seconds", "5", "--seed", "42"])
    assert code == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["noise_bytes"] > 4000
    assert stats["false_accepts"] <= 5
    assert stats["accept_rate_per_byte"] < 1e-4


def test_module_entry_point(tmp_path):
    scenario = write_scenario(tmp_path, FORWARD_SCENARIO)
    proc = subprocess.run(
        [sys.executable, "-m", "antsim.cli", "run",
         "--scenario", str(scenario), "--out", str(tmp_path / "t.ndjson")],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["final_mode"] == "stop"


def test_unknown_subcommand_errors():
    with pytest.raises(SystemExit):
        main(["explode"])
