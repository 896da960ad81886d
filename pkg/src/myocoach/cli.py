"""Command-line entry point.

Subcommands: `run` trains one reward condition over the configured seeds,
`compare` runs all four conditions and writes the summary table, `replay`
re-runs a trial from recorded EMG/feedback traces, `serve` starts the live
session service, and `session` drives a running service. Any field can come
from a TOML/JSON config file; flags override it.
"""
import argparse
import json
import sys
import urllib.request
from pathlib import Path

from .config import ExperimentConfig, load_config_file
from .experiment import (ALL_MODES, aggregate, compare_conditions,
                         run_experiment, write_summary_csv)
from .rewards import RewardMode


def add_config_flags(parser):
    parser.add_argument("--config", help="TOML or JSON config file")
    parser.add_argument("--mode", choices=[m.value for m in RewardMode])
    parser.add_argument("--steps", type=int, dest="max_steps", help="steps per trial")
    parser.add_argument("--seeds", type=int, nargs="+", help="trial seeds")
    parser.add_argument("--out", dest="output_dir", help="directory for run logs")
    parser.add_argument("--pacing", choices=["fast", "realtime"])
    parser.add_argument("--emg-source", choices=["simulated", "replay", "live"])
    parser.add_argument("--emg-trace", help="CSV trace for the replay EMG source")
    parser.add_argument("--feedback", choices=["auto", "none", "oracle", "replay"])
    parser.add_argument("--feedback-trace", help="CSV trace of recorded feedback")
    parser.add_argument("--oracle-period", type=int, help="mean steps between oracle events")
    parser.add_argument("--oracle-noise", type=float, help="oracle sign-flip probability")
    parser.add_argument("--update-with", choices=["raw", "executed"],
                        help="action fed to the policy updates")
    parser.add_argument("--telemetry-every", type=int, help="stream every Nth frame")


def build_config(args) -> ExperimentConfig:
    data = load_config_file(args.config) if args.config else {}
    flat = {
        "mode": args.mode, "max_steps": args.max_steps, "seeds": args.seeds,
        "output_dir": args.output_dir, "pacing": args.pacing,
        "emg_source": args.emg_source, "emg_trace": args.emg_trace,
        "feedback": args.feedback, "feedback_trace": args.feedback_trace,
        "telemetry_every": args.telemetry_every,
    }
    data.update({k: v for k, v in flat.items() if v is not None})
    if args.oracle_period is not None or args.oracle_noise is not None:
        oracle = dict(data.get("oracle", {}))
        if args.oracle_period is not None:
            oracle["period"] = args.oracle_period
        if args.oracle_noise is not None:
            oracle["noise_p"] = args.oracle_noise
        data["oracle"] = oracle
    if args.update_with is not None:
        learner = dict(data.get("learner", {}))
        learner["update_with"] = args.update_with
        data["learner"] = learner
    return ExperimentConfig.from_dict(data)


def print_summary(summary):
    print(f"{summary.condition:>12}  n={summary.n}"
          + (f" (+{summary.n_faulted} faulted)" if summary.n_faulted else "")
          + f"  mae_all={summary.mae_all_mean:.4f}±{summary.mae_all_std:.4f}"
          + f"  mae_10k={summary.mae_10k_mean:.4f}±{summary.mae_10k_std:.4f}"
          + f"  mae_5k={summary.mae_5k_mean:.4f}±{summary.mae_5k_std:.4f}")


def cmd_run(args) -> int:
    cfg = build_config(args)
    results = run_experiment(cfg)
    for res in results:
        if res.fault:
            print(f"seed {res.seed}: FAULTED after {len(res.steps)} steps ({res.fault_message})")
        else:
            print(f"seed {res.seed}: mae_all={res.mae_all:.4f} "
                  f"mae_10k={res.mae_last10k:.4f} mae_5k={res.mae_last5k:.4f}")
    summary = aggregate(results)
    print_summary(summary)
    write_summary_csv(Path(cfg.output_dir) / "summary.csv", [summary])
    return 0


def cmd_compare(args) -> int:
    cfg = build_config(args)
    summaries = compare_conditions(cfg, ALL_MODES)
    for summary in summaries.values():
        print_summary(summary)
    write_summary_csv(Path(cfg.output_dir) / "summary.csv", list(summaries.values()))
    print(f"summary written to {Path(cfg.output_dir) / 'summary.csv'}")
    return 0


def cmd_replay(args) -> int:
    if not args.emg_trace:
        print("replay requires --emg-trace", file=sys.stderr)
        return 2
    args.emg_source = "replay"
    if args.feedback_trace:
        args.feedback = "replay"
    cfg = build_config(args)
    return cmd_run_config(cfg)


def cmd_run_config(cfg) -> int:
    results = run_experiment(cfg)
    summary = aggregate(results)
    print_summary(summary)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    cfg = build_config(args)
    if args.pacing is None:
        import dataclasses
        cfg = dataclasses.replace(cfg, pacing="realtime")
    static_dir = args.ui
    if static_dir is None and Path("frontend/dist").is_dir():
        static_dir = "frontend/dist"
    app = create_app(cfg, static_dir=static_dir)
    print(f"session service on http://{args.host}:{args.port} "
          f"(websocket /ws, health /health"
          + (f", cockpit /ui" if static_dir else "") + ")")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_session(args) -> int:
    base = args.server.rstrip("/")
    if args.command == "status":
        req = urllib.request.Request(f"{base}/health")
    else:
        req = urllib.request.Request(f"{base}/session/{args.command}",
                                     data=b"null", method="POST",
                                     headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            print(json.dumps(json.loads(resp.read()), indent=2))
    except urllib.error.HTTPError as exc:
        print(f"error {exc.code}: {exc.read().decode()}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="myocoach",
        description="actor-critic training workbench for a simulated myoelectric joint")
    sub = parser.add_subparsers(dest="command_name", required=True)

    p_run = sub.add_parser("run", help="train one reward condition over the configured seeds")
    add_config_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="run all four reward conditions and summarize")
    add_config_flags(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)

    p_rep = sub.add_parser("replay", help="re-run a trial from recorded EMG/feedback traces")
    add_config_flags(p_rep)
    p_rep.set_defaults(func=cmd_replay)

    p_srv = sub.add_parser("serve", help="start the live session service")
    add_config_flags(p_srv)
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8733)
    p_srv.add_argument("--ui", help="directory with the built cockpit (served at /ui)")
    p_srv.set_defaults(func=cmd_serve)

    p_ses = sub.add_parser("session", help="control a running session service")
    p_ses.add_argument("command", choices=["status", "start", "pause", "resume", "stop"])
    p_ses.add_argument("--server", default="http://127.0.0.1:8733")
    p_ses.set_defaults(func=cmd_session)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
