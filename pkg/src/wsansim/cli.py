"""Command-line entry point.

    wsansim run      --scenario F [--out DIR] [--seed S] [--compensate on|off]
    wsansim sweep    --scenario F --seeds N [--jobs J] [--out DIR]
    wsansim stats    --loss-table F
    wsansim validate --scenario F

Exit status: 0 success, 1 validation error, 2 I/O error.
Output directory defaults to $WSANSIM_OUT, then the current directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .channel import summarize
from .engine import SimulationError, run_scenario
from .formats import (
    FormatError,
    format_summary,
    load_loss_table,
    parse_flag,
    parse_scenario,
    read_scenario_text,
    trace_to_csv,
)
from .sweep import format_sweep_csv, format_sweep_summary, run_sweep

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


def _load_scenario(ref: str):
    text, base_dir = read_scenario_text(ref)
    return parse_scenario(text, base_dir)


def _out_dir(arg: str | None) -> Path:
    out = Path(arg or os.environ.get("WSANSIM_OUT") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str) -> None:
    # newline="" keeps "\n" on every platform so outputs stay byte-stable.
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_run(args) -> int:
    sc = _load_scenario(args.scenario)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.compensate is not None:
        overrides["compensate"] = parse_flag(args.compensate, "--compensate")
    sc = sc.with_overrides(**overrides)
    trace = run_scenario(sc)
    out = _out_dir(args.out)
    summary = format_summary(trace.summary, sc)
    _write(out / "trace.csv", trace_to_csv(trace))
    _write(out / "summary.txt", summary)
    sys.stdout.write(summary)
    return EXIT_OK


def cmd_sweep(args) -> int:
    sc = _load_scenario(args.scenario)
    result = run_sweep(sc, args.seeds, jobs=args.jobs)
    out = _out_dir(args.out)
    summary = format_sweep_summary(result)
    _write(out / "sweep.csv", format_sweep_csv(result))
    _write(out / "sweep_summary.txt", summary)
    sys.stdout.write(summary)
    return EXIT_OK


def cmd_stats(args) -> int:
    table = load_loss_table(args.loss_table)
    print("distance_m,count,mean,min,max")
    for s in summarize(table):
        print(f"{s.distance:g},{s.count},{s.mean:.4f},{s.min:.4f},{s.max:.4f}")
    return EXIT_OK


def cmd_validate(args) -> int:
    sc = _load_scenario(args.scenario)
    print(f"ok: {sc.n_steps} steps, {len(sc.profile.segments)} segments, "
          f"{len(sc.table.distances)} table distances")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsansim",
        description="Trace-driven simulation of a PID loop over a lossy wireless link.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one scenario and write trace + summary")
    p.add_argument("--scenario", required=True, help="scenario file or builtin:<name>")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--compensate", choices=["on", "off"])
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="paired compensated/uncompensated runs over many seeds")
    p.add_argument("--scenario", required=True)
    p.add_argument("--seeds", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("stats", help="per-distance loss-rate statistics")
    p.add_argument("--loss-table", required=True, help="CSV path or builtin:<name>")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("validate", help="check a scenario without running it")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, SimulationError, ValueError) as exc:
        print(f"wsansim: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"wsansim: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
