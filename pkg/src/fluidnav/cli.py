"""Command-line interface.

Subcommands mirror the experiment workflow: ``run`` a scenario to a
trajectory table (optionally rendering the figure alongside), ``audit`` a
table against its scenario, ``plot`` a table, and ``field`` a stream/
potential grid at a given time.

Exit codes: 0 success, 1 validation or runtime failure, 2 safety violation
detected by the audit.
"""

from __future__ import annotations

import argparse
import sys

from .errors import FluidNavError, StepBudgetExhausted
from .scenario import ScenarioSpec
from .scenario_io import parse_scenario
from .sim_engine import audit, format_report, run
from .trajectory_io import (
    dump_field_grid,
    read_trajectory,
    write_field_grid,
    write_trajectory,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VIOLATION = 2


def _cmd_run(args) -> int:
    spec = parse_scenario(args.scenario)
    try:
        log = run(spec)
        budget_note = None
    except StepBudgetExhausted as exc:
        log = exc.log
        budget_note = str(exc)
    write_trajectory(log, args.out)
    print(f"wrote {len(log.ticks)} ticks x {len(log.agent_ids())} agents to {args.out}")
    if args.plot:
        from .plotting import render_plot

        render_plot(log, spec, args.plot)
        print(f"wrote figure to {args.plot}")
    report = audit(log, spec)
    print(format_report(report))
    if budget_note:
        print(f"error: {budget_note}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_audit(args) -> int:
    spec = parse_scenario(args.spec)
    log = read_trajectory(args.table)
    report = audit(log, spec)
    print(format_report(report))
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_plot(args) -> int:
    from .plotting import render_plot

    spec = parse_scenario(args.spec)
    log = read_trajectory(args.table)
    render_plot(log, spec, args.out)
    print(f"wrote figure to {args.out}")
    return EXIT_OK


def _field_bounds(spec: ScenarioSpec, margin: float = 1.0):
    xs = [a.position.real for a in spec.agents]
    ys = [a.position.imag for a in spec.agents]
    for a in spec.agents:
        if a.goal is not None:
            xs.append(a.goal.real)
            ys.append(a.goal.imag)
    return (min(xs) - margin, max(xs) + margin, min(ys) - margin, max(ys) + margin)


def _cmd_field(args) -> int:
    spec = parse_scenario(args.scenario)
    from .field_probe import field_at_time

    field = field_at_time(spec, args.time, cluster_id=args.cluster)
    bounds = tuple(args.bounds) if args.bounds else _field_bounds(spec)
    points = dump_field_grid(field, bounds, args.resolution)
    write_field_grid(points, args.out)
    print(f"wrote {len(points)} grid points to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluidnav",
        description="Deterministic streamline navigation: run, audit, and plot scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write the trajectory table")
    p_run.add_argument("scenario", help="scenario file (YAML)")
    p_run.add_argument("--out", required=True, help="output trajectory table (CSV)")
    p_run.add_argument("--plot", help="also render the trajectory figure (SVG)")
    p_run.set_defaults(func=_cmd_run)

    p_audit = sub.add_parser("audit", help="recompute safety metrics from a table")
    p_audit.add_argument("table", help="trajectory table (CSV)")
    p_audit.add_argument("--spec", required=True, help="scenario file the table came from")
    p_audit.set_defaults(func=_cmd_audit)

    p_plot = sub.add_parser("plot", help="render a trajectory table to a figure")
    p_plot.add_argument("table", help="trajectory table (CSV)")
    p_plot.add_argument("--spec", required=True, help="scenario file the table came from")
    p_plot.add_argument("--out", required=True, help="output figure (SVG)")
    p_plot.set_defaults(func=_cmd_plot)

    p_field = sub.add_parser("field", help="export the (phi, psi) grid active at a time")
    p_field.add_argument("scenario", help="scenario file (YAML)")
    p_field.add_argument("--time", type=float, required=True, help="scenario time (s)")
    p_field.add_argument("--out", required=True, help="output grid table (CSV)")
    p_field.add_argument("--resolution", type=int, default=101,
                         help="grid points per axis (default 101)")
    p_field.add_argument("--bounds", type=float, nargs=4,
                         metavar=("XMIN", "XMAX", "YMIN", "YMAX"),
                         help="grid bounds in meters (default: agent bounding box +1 m)")
    p_field.add_argument("--cluster", type=int, default=1,
                         help="cluster whose field to export (default 1)")
    p_field.set_defaults(func=_cmd_field)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FluidNavError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
