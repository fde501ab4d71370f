"""Command-line entry points: batch runs, protocol fuzzing, live service."""

from __future__ import annotations

import argparse
import json
import sys

from antsim.scenario import Scenario, ScenarioError, load_scenario
from antsim.transmitter import TxConfig
from antsim.world import World, run_scenario


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario, seed_override=args.seed)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    summary = run_scenario(scenario, out_path=args.out)
    print(summary.to_json())
    return 0


def _cmd_fuzz(args: argparse.Namespace) -> int:
    # Silent supervisor, default link: the receiver sees nothing but the
    # radio's own idle noise, which is exactly what the parser must shrug off.
    scenario = Scenario(
        seed=args.seed,
        duration=float(args.seconds),
        tx=TxConfig(keepalive_enabled=False),
    )
    summary = World(scenario).run()
    print(
        json.dumps(
            {
                "seconds": scenario.duration,
                "seed": scenario.seed,
                "noise_bytes": summary.noise_bytes,
                "false_accepts": summary.false_accepts,
                "noise_rejected": summary.noise_rejected,
                "mode_changes": summary.mode_changes,
                "accept_rate_per_byte": (
                    summary.false_accepts / summary.noise_bytes
                    if summary.noise_bytes
                    else 0.0
                ),
            }
        )
    )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from antsim.server import default_live_scenario, serve

    if args.scenario is not None:
        try:
            scenario = load_scenario(args.scenario, seed_override=args.seed)
        except (ScenarioError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    else:
        scenario = default_live_scenario()
        if args.seed is not None:
            scenario.seed = args.seed
            scenario.link.seed = args.seed
    serve(port=args.port, host=args.host, world=World(scenario))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antsim",
        description="Deterministic teleoperation simulator for the six-legged walker",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file and write telemetry")
    p_run.add_argument("--scenario", required=True, help="scenario JSON path")
    p_run.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p_run.add_argument("--out", default="telemetry.ndjson", help="telemetry output path")
    p_run.set_defaults(func=_cmd_run)

    p_fuzz = sub.add_parser("fuzz", help="noise-only soak of the protocol stack")
    p_fuzz.add_argument("--seconds", type=float, default=60.0, help="simulated duration")
    p_fuzz.add_argument("--seed", type=int, default=0, help="noise RNG seed")
    p_fuzz.set_defaults(func=_cmd_fuzz)

    p_serve = sub.add_parser("serve", help="live teleoperation over WebSocket")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--scenario", default=None, help="optional scenario JSON path")
    p_serve.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
