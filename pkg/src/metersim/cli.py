"""Command line front end.

Subcommands:
    run            simulate a scenario and write curve/adoption/event files
    compare        correlation and peak statistics for two load curve CSVs
    network-stats  contact network summary for a scenario
    validate       check a scenario file and list every violation

Exit codes: 0 on success, 2 on validation or comparison input problems
(violations printed one per line), 1 on I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
import time

from . import __version__
from .domain import Scenario, ScenarioValidationError, TimeOfDay, load_scenario
from .engine import STREAM_ANALYSIS, STREAM_NETWORK, run, substream
from .metrics import (
    DEFAULT_BUCKET_MINUTES,
    LengthMismatchError,
    aggregate_load,
    peak_reduction,
    peak_stats,
    pearson_correlation,
    read_load_curve,
    write_load_curve,
)
from .network import BadDegreeError, clustering_coefficient, generate_small_world, mean_path_length_sampled

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2

DEFAULT_WINDOW = "17:00-20:00"


def _parse_window_arg(text: str) -> tuple[TimeOfDay, TimeOfDay]:
    try:
        start_text, end_text = text.split("-")
        window = (TimeOfDay.parse(start_text), TimeOfDay.parse(end_text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected HH:MM-HH:MM, got {text!r}: {exc}") from exc
    if window[0].minutes >= window[1].minutes:
        raise argparse.ArgumentTypeError(f"window {text!r} is empty")
    return window


def _load_scenario_or_exit(path: str) -> Scenario | int:
    try:
        return load_scenario(path)
    except ScenarioValidationError as exc:
        for issue in exc.issues:
            print(str(issue), file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_IO


def _apply_overrides(scenario: Scenario, args: argparse.Namespace) -> Scenario | int:
    config = scenario.config
    if getattr(args, "seed", None) is not None:
        if not 0 <= args.seed < 2**64:
            print("BadValue: --seed must be an unsigned 64-bit integer", file=sys.stderr)
            return EXIT_INVALID
        config = dataclasses.replace(config, seed=args.seed)
    fraction = getattr(args, "experienced_fraction", None)
    if fraction is not None:
        if not 0.0 <= fraction <= 1.0:
            print("BadValue: --experienced-fraction must be in [0, 1]", file=sys.stderr)
            return EXIT_INVALID
        config = dataclasses.replace(config, initial_experienced_fraction=fraction)
    return dataclasses.replace(scenario, config=config)


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load_scenario_or_exit(args.config)
    if isinstance(scenario, int):
        return scenario
    scenario = _apply_overrides(scenario, args)
    if isinstance(scenario, int):
        return scenario

    tick = scenario.config.tick_minutes
    if DEFAULT_BUCKET_MINUTES % tick != 0:
        print(
            f"BadBucket: tick_minutes {tick} does not divide the "
            f"{DEFAULT_BUCKET_MINUTES} minute output bucket",
            file=sys.stderr,
        )
        return EXIT_INVALID

    started = time.monotonic()
    output = run(scenario, record_events=args.events)
    curve = aggregate_load(output, DEFAULT_BUCKET_MINUTES)

    try:
        os.makedirs(args.out, exist_ok=True)
        files = []

        curve_path = os.path.join(args.out, "loadcurve.csv")
        write_load_curve(curve, curve_path)
        files.append("loadcurve.csv")

        adoption_path = os.path.join(args.out, "adoption.csv")
        with open(adoption_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("day", "uninfluenced", "inexperienced", "experienced"))
            for day, row in enumerate(output.adoption_series):
                writer.writerow((day, *row))
        files.append("adoption.csv")

        if args.events:
            events_path = os.path.join(args.out, "events.csv")
            with open(events_path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(("tick", "agent_id", "kind", "detail"))
                for ev in output.events:
                    writer.writerow((ev.tick, ev.agent_id, ev.kind, ev.detail))
            files.append("events.csv")

        manifest = {
            "scenario_path": os.path.abspath(args.config),
            "seed": output.seed,
            "out_dir": os.path.abspath(args.out),
            "files": files,
            "engine_version": __version__,
            "duration_seconds": round(time.monotonic() - started, 3),
        }
        with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        print(f"cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO

    time_of_peak, peak_watts = peak_stats(curve)
    print(f"seed={output.seed}")
    print(f"files={','.join(files)}")
    print(f"peak_start={time_of_peak}")
    print(f"peak_watts={peak_watts:.3f}")
    last = output.adoption_series[-1]
    print(f"final_adoption=uninfluenced:{last[0]},inexperienced:{last[1]},experienced:{last[2]}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    try:
        base = read_load_curve(args.base)
        treated = read_load_curve(args.treated)
    except OSError as exc:
        print(f"cannot read curve: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"BadCurve: {exc}", file=sys.stderr)
        return EXIT_INVALID

    try:
        correlation = pearson_correlation(base, treated)
        reduction = peak_reduction(base, treated, args.window)
    except (LengthMismatchError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID

    base_peak = peak_stats(base)
    treated_peak = peak_stats(treated)
    print(f"correlation={correlation:.6f}")
    print(f"base_peak_start_min={base_peak[0].minutes}")
    print(f"base_peak_watts={base_peak[1]:.3f}")
    print(f"treated_peak_start_min={treated_peak[0].minutes}")
    print(f"treated_peak_watts={treated_peak[1]:.3f}")
    print(f"peak_reduction={reduction:.6f}")
    return EXIT_OK


def cmd_network_stats(args: argparse.Namespace) -> int:
    scenario = _load_scenario_or_exit(args.config)
    if isinstance(scenario, int):
        return scenario
    scenario = _apply_overrides(scenario, args)
    if isinstance(scenario, int):
        return scenario
    config = scenario.config
    try:
        net = generate_small_world(
            config.population,
            config.network_mean_degree_K,
            config.network_rewire_beta,
            substream(config.seed, STREAM_NETWORK),
        )
    except BadDegreeError as exc:
        print(f"BadDegree: {exc}", file=sys.stderr)
        return EXIT_INVALID

    mean_degree = 2 * net.edge_count / net.node_count
    clustering = clustering_coefficient(net)
    path_length = mean_path_length_sampled(net, substream(config.seed, STREAM_ANALYSIS))
    print("nodes,edges,mean_degree,clustering_coefficient,mean_path_length")
    print(
        f"{net.node_count},{net.edge_count},{mean_degree:.6f},"
        f"{clustering:.6f},{path_length:.6f}"
    )
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    scenario = _load_scenario_or_exit(args.config)
    if isinstance(scenario, int):
        return scenario
    print("ok")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metersim",
        description="Household load simulation under mandated smart metering",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a scenario and write result files")
    p_run.add_argument("--config", required=True, help="scenario JSON file")
    p_run.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--events", action="store_true", help="also write events.csv")
    p_run.add_argument(
        "--experienced-fraction", type=float, default=None, dest="experienced_fraction",
        help="override initial_experienced_fraction",
    )
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="compare two load curve CSVs")
    p_cmp.add_argument("base", help="baseline curve CSV")
    p_cmp.add_argument("treated", help="treated curve CSV")
    p_cmp.add_argument(
        "--window", type=_parse_window_arg, default=_parse_window_arg(DEFAULT_WINDOW),
        help=f"evaluation window, HH:MM-HH:MM (default {DEFAULT_WINDOW})",
    )
    p_cmp.set_defaults(func=cmd_compare)

    p_net = sub.add_parser("network-stats", help="summarize the scenario's contact network")
    p_net.add_argument("--config", required=True, help="scenario JSON file")
    p_net.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p_net.set_defaults(func=cmd_network_stats)

    p_val = sub.add_parser("validate", help="validate a scenario file")
    p_val.add_argument("--config", required=True, help="scenario JSON file")
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
