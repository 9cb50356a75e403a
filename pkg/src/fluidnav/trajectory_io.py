"""Delimited trajectory tables and stream-function grid exports.

All numbers are serialized with 17 significant digits so that
parse(serialize(x)) reproduces every double bit-exactly, and
serialize(parse(text)) reproduces the text byte-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .errors import FluidNavError, SingularPoint
from .flow_field import FlowField
from .logbook import AgentRecord, SimEvent, TrajectoryLog, make_tick

COLUMNS = ("t", "agent_id", "cluster", "x", "y", "phi", "psi",
           "beta", "theta", "role", "event_flags")

GRID_COLUMNS = ("x", "y", "phi", "psi", "inside_disk")

_ROW_EVENT_KINDS = {"fail": "failure"}


def _fmt(value: float) -> str:
    return "%.17g" % value


def _fmt_opt(value) -> str:
    return "" if value is None else _fmt(value)


def _fmt_int_opt(value) -> str:
    return "" if value is None else str(value)


def write_trajectory(log: TrajectoryLog, path) -> None:
    """Write one row per (tick, agent); header row mandatory."""
    path = Path(path)
    lines = [",".join(COLUMNS)]
    for tick in log.ticks:
        for rec in tick.agents:
            lines.append(",".join((
                _fmt(tick.time),
                str(rec.agent_id),
                str(rec.cluster),
                _fmt(rec.x),
                _fmt(rec.y),
                _fmt_opt(rec.phi),
                _fmt_opt(rec.psi),
                _fmt_int_opt(rec.beta),
                _fmt_opt(rec.theta),
                rec.role,
                ";".join(rec.flags),
            )))
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise FluidNavError(f"cannot write trajectory table {path}: {exc}") from exc


def _parse_opt_float(text: str, where: str):
    if text == "":
        return None
    try:
        return float(text)
    except ValueError as exc:
        raise FluidNavError(f"{where}: bad number {text!r}") from exc


def read_trajectory(path) -> TrajectoryLog:
    """Parse a trajectory table back into a log.

    Per-tick safety metrics are recomputed from the rows; per-agent events
    are rebuilt from the flag column.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FluidNavError(f"cannot read trajectory table {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or tuple(lines[0].split(",")) != COLUMNS:
        raise FluidNavError(f"{path}: missing or malformed header row")

    log = TrajectoryLog()
    current_time: float | None = None
    pending: list[AgentRecord] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != len(COLUMNS):
            raise FluidNavError(f"{path}:{lineno}: expected {len(COLUMNS)} columns, "
                                f"got {len(parts)}")
        where = f"{path}:{lineno}"
        t = float(parts[0])
        rec = AgentRecord(
            agent_id=int(parts[1]),
            cluster=int(parts[2]),
            x=float(parts[3]),
            y=float(parts[4]),
            phi=_parse_opt_float(parts[5], where),
            psi=_parse_opt_float(parts[6], where),
            beta=None if parts[7] == "" else int(parts[7]),
            theta=_parse_opt_float(parts[8], where),
            role=parts[9],
            flags=tuple(parts[10].split(";")) if parts[10] else (),
        )
        if current_time is not None and t != current_time:
            log.ticks.append(make_tick(current_time, pending))
            pending = []
        current_time = t
        pending.append(rec)
        for fl in rec.flags:
            kind = _ROW_EVENT_KINDS.get(fl, fl)
            log.events.append(SimEvent(t, kind, rec.agent_id))
    if pending:
        log.ticks.append(make_tick(current_time, pending))
    return log


@dataclass(frozen=True)
class GridPoint:
    x: float
    y: float
    phi: float
    psi: float
    inside_disk: bool


def dump_field_grid(field: FlowField, bounds, resolution: int) -> list[GridPoint]:
    """Sample (phi, psi) on a regular grid; points inside disks are flagged
    but still carry values (non-finite only at the exact centers)."""
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    xmin, xmax, ymin, ymax = bounds
    points = []
    for iy in range(resolution):
        y = ymin + (ymax - ymin) * iy / (resolution - 1)
        for ix in range(resolution):
            x = xmin + (xmax - xmin) * ix / (resolution - 1)
            z = complex(x, y)
            f = field._transform(z)
            inside = field.effective_beta == 1 and any(
                abs(z - s.center) < s.radius for s in field.singularities)
            points.append(GridPoint(x, y, f.real, f.imag, inside))
    return points


def write_field_grid(points, path) -> None:
    path = Path(path)
    lines = [",".join(GRID_COLUMNS)]
    for p in points:
        lines.append(",".join((_fmt(p.x), _fmt(p.y), _fmt(p.phi), _fmt(p.psi),
                               "1" if p.inside_disk else "0")))
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise FluidNavError(f"cannot write field grid {path}: {exc}") from exc


def read_field_grid(path) -> list[GridPoint]:
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise FluidNavError(f"cannot read field grid {path}: {exc}") from exc
    if not lines or tuple(lines[0].split(",")) != GRID_COLUMNS:
        raise FluidNavError(f"{path}: missing or malformed header row")
    points = []
    for line in lines[1:]:
        if not line:
            continue
        x, y, phi, psi, inside = line.split(",")
        points.append(GridPoint(float(x), float(y), float(phi), float(psi), inside == "1"))
    return points
