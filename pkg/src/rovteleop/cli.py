"""Command line front-end.

Subcommands:
  run                  run one session with a scripted operator
  replay               re-run a recorded event log and print its metrics
  report               aggregate metrics from a directory of event logs
  bench-step-response  emit the closed-loop step-response trace as CSV
  serve                run the live gateway (WebSocket snapshot stream)
  bridge               standalone UDP frame-forwarding bridge
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import threading

from .eventlog import read_event_log
from .harness import (
    IdleOperator,
    OptimalToHOperator,
    bench_rows_to_csv,
    bench_step_response,
    render_report,
    replay,
    report,
    run_session,
)
from .scenario import ScenarioError, load_scenario
from .session import TaskMetrics


def _metrics_text(metrics: TaskMetrics) -> str:
    d = metrics.as_dict()
    return "\n".join(f"{k}: {v}" for k, v in d.items())


def _cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.operator in ("script", "optimal"):
        operator = OptimalToHOperator(scenario)
    elif args.operator == "idle":
        operator = IdleOperator()
    elif args.operator == "live":
        print("live operation runs through the gateway: use `rovteleop serve`", file=sys.stderr)
        return 2
    else:
        print(f"unknown operator {args.operator!r} (script|optimal|idle|live)", file=sys.stderr)
        return 2
    result = run_session(
        scenario,
        operator,
        limit_s=args.limit_s,
        record_path=args.record,
        seed=args.seed,
    )
    if args.json:
        print(json.dumps(result.metrics.as_dict()))
    else:
        print(_metrics_text(result.metrics))
    return 0


def _cmd_replay(args) -> int:
    result = replay(args.log)
    if args.json:
        print(json.dumps(result.metrics.as_dict()))
    else:
        print(_metrics_text(result.metrics))
    return 0


def _cmd_report(args) -> int:
    metrics = []
    for name in sorted(os.listdir(args.logs)):
        if not name.endswith((".jsonl", ".log")):
            continue
        records = read_event_log(os.path.join(args.logs, name))
        final = [r for r in records if r.kind == "metrics"]
        if final:
            metrics.append(TaskMetrics(**final[-1].payload))
    if not metrics:
        print(f"no event logs with metrics records under {args.logs}", file=sys.stderr)
        return 2
    agg = report(metrics)
    print(json.dumps(agg) if args.json else render_report(agg))
    return 0


def _cmd_bench(args) -> int:
    scenario = load_scenario(args.scenario)
    rows = bench_step_response(scenario)
    csv_text = bench_rows_to_csv(rows)
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        print(f"wrote {len(rows)} samples to {args.out}")
    else:
        sys.stdout.write(csv_text)
    return 0


def _cmd_serve(args) -> int:
    import dataclasses

    from .gateway import serve

    scenario = load_scenario(args.scenario)
    if args.tick_hz:
        scenario = dataclasses.replace(
            scenario,
            session=dataclasses.replace(scenario.session, tick_hz=args.tick_hz),
        )
    serve(
        args.bind,
        scenario,
        seed=args.seed,
        realtime=not args.headless,
        record_path=args.record,
    )
    return 0


def _cmd_bridge(args) -> int:
    from .udpbridge import run_bridge

    stop = threading.Event()
    try:
        run_bridge(
            args.listen_port,
            args.forward,
            stats_interval_s=args.stats_interval,
            stop=stop,
        )
    except KeyboardInterrupt:
        stop.set()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rovteleop", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one session with a scripted operator")
    p.add_argument("--scenario", default="default", help="builtin name or YAML path")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--limit-s", type=float, default=None)
    p.add_argument("--operator", default="script", help="script | optimal | idle | live")
    p.add_argument("--record", metavar="PATH", default=None, help="write event log")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("replay", help="re-run a recorded event log")
    p.add_argument("--log", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("report", help="aggregate metrics from recorded logs")
    p.add_argument("--logs", required=True, help="directory of event logs")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("bench-step-response", help="closed-loop step response CSV")
    p.add_argument("--scenario", default="default")
    p.add_argument("--out", default="-", help="CSV path, or - for stdout")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("serve", help="run the live gateway")
    p.add_argument("--bind", default="127.0.0.1:8765")
    p.add_argument("--scenario", default="default")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tick-hz", type=float, default=None)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--realtime", dest="headless", action="store_false")
    mode.add_argument("--headless", dest="headless", action="store_true")
    p.set_defaults(headless=False)
    p.add_argument("--record", metavar="PATH", default=None)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("bridge", help="standalone UDP frame bridge")
    p.add_argument("--listen-port", type=int, required=True)
    p.add_argument("--forward", required=True, metavar="HOST:PORT")
    p.add_argument("--stats-interval", type=float, default=5.0)
    p.set_defaults(func=_cmd_bridge)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as err:
        print(f"scenario error: {err}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
