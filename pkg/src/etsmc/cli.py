"""Command-line entry points.

Exit codes: 0 on success, 1 on usage or configuration problems
(including unreadable files), 2 when a simulation diverges.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

from . import plots
from .config import FullConfig, load_config, write_effective_config
from .engine import compare, normalize_mode, run
from .errors import DivergenceError, EtsmcError
from .report import (
    compare_metrics,
    render_kv,
    render_text,
    summarize,
    trace_metrics,
)
from .traceio import read_trace, write_trace

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DIVERGED = 2

_SHORT = {"event": "et", "time": "tt"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="etsmc",
        description=("Closed-loop simulation of an elastically actuated "
                     "two-joint limb under time- or event-triggered "
                     "sliding-mode control."),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", metavar="TOML",
                       help="configuration file; falls back to $ETSMC_CONFIG")
        p.add_argument("--out", default="etsmc-out", metavar="DIR",
                       help="output directory (default: %(default)s)")
        p.add_argument("--seed", type=int, help="override sim.seed")
        p.add_argument("--duration", type=float, metavar="S",
                       help="override sim.duration")
        p.add_argument("--no-plots", action="store_true",
                       help="skip SVG rendering")

    sim = sub.add_parser("simulate", help="run one closed-loop simulation")
    sim.add_argument("--mode", default="event",
                     help="trigger mode: event/et or time/tt "
                          "(default: %(default)s)")
    common(sim)

    cmp_p = sub.add_parser(
        "compare", help="run both trigger modes on the same seed and report"
    )
    common(cmp_p)

    rep = sub.add_parser("report", help="summarize an existing trace CSV")
    rep.add_argument("trace", help="path to a trace CSV")
    rep.add_argument("--kv", action="store_true",
                     help="print machine-readable key=value lines")
    return parser


def _load(args: argparse.Namespace) -> FullConfig:
    path = args.config or os.environ.get("ETSMC_CONFIG") or None
    cfg = load_config(path)
    sim = cfg.sim
    if args.seed is not None:
        sim = dataclasses.replace(sim, seed=args.seed)
    if args.duration is not None:
        sim = dataclasses.replace(sim, duration=args.duration)
    if sim is not cfg.sim:
        cfg = dataclasses.replace(cfg, sim=sim)
        cfg.validate()
    return cfg


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load(args)
    mode = normalize_mode(args.mode)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = run(mode, **cfg.run_kwargs())
    short = _SHORT[result.mode]
    write_trace(out / f"trace_{short}.csv", result.records)
    metrics = summarize(result)
    (out / "summary.kv").write_text(render_kv(metrics), encoding="ascii")
    text = render_text(metrics, title=f"{short} run summary")
    (out / "summary.txt").write_text(text, encoding="ascii")
    write_effective_config(out / "effective_config.toml", cfg)
    if not args.no_plots:
        plots.single_run_plots(out, result.records, result.threshold_value,
                               short)
    sys.stdout.write(text)
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    cfg = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    outcome = compare(**cfg.run_kwargs())
    write_trace(out / "trace_tt.csv", outcome.time_result.records)
    write_trace(out / "trace_et.csv", outcome.event_result.records)
    metrics = compare_metrics(outcome, limb=cfg.limb,
                              disturbance_bound=cfg.disturbance.amplitude)
    (out / "report.kv").write_text(render_kv(metrics), encoding="ascii")
    text = render_text(metrics, title="trigger mode comparison")
    (out / "report.txt").write_text(text, encoding="ascii")
    write_effective_config(out / "effective_config.toml", cfg)
    if not args.no_plots:
        plots.comparison_plots(out, outcome.time_result.records,
                               outcome.event_result.records,
                               outcome.event_result.threshold_value,
                               cfg.sim.sampling_period)
    sys.stdout.write(text)
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    records = read_trace(args.trace)
    metrics = trace_metrics(records)
    if args.kv:
        sys.stdout.write(render_kv(metrics))
    else:
        sys.stdout.write(render_text(metrics, title=f"trace {args.trace}"))
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; fold that into the config
        # error code so 2 stays reserved for divergence
        return EXIT_OK if not exc.code else EXIT_ERROR
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "compare":
            return _cmd_compare(args)
        return _cmd_report(args)
    except DivergenceError as exc:
        print(f"diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except EtsmcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
