"""Scenario orchestration: dispatch, and the safety audit over produced logs.

The audit works from log rows alone (plus the scenario parameters), so it
produces identical results for an in-memory log and for one re-parsed from
disk.  Violations are regime-aware: stationary exclusion disks are hard
boundaries, while for moving singularities the contract is a minimum
separation distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .clusters import sncf_run
from .flow_field import FlowField, Singularity
from .guidance import tvc_run, tvnc_run
from .logbook import TickRecord, TrajectoryLog
from .scenario import ScenarioSpec

PENETRATION_TOLERANCE = 1e-3
LOG_REPRODUCTION_TOLERANCE = 1e-9


def run(spec: ScenarioSpec) -> TrajectoryLog:
    """Validate and dispatch to the regime's runner.  Pure: identical specs
    produce identical logs."""
    spec.validate()
    if spec.regime == "SNCF":
        return sncf_run(spec)
    if spec.regime == "TVNC":
        return tvnc_run(spec)
    return tvc_run(spec)


@dataclass(frozen=True)
class SafetyReport:
    regime: str
    n_ticks: int
    min_singularity_distance: float | None
    min_cylinder_clearance: float | None  # distance minus disk radius
    min_cross_distance: float | None      # across clusters / role sets
    min_intra_distance: float | None
    max_psi_drift: float | None           # unflagged same-field steps only
    max_log_mismatch: float | None        # re-evaluated (phi, psi) vs logged
    goal_residuals: tuple[tuple[int, float], ...]
    aggregate_residual: float | None
    fallback_counts: dict = field(default_factory=dict)
    hold_counts: dict = field(default_factory=dict)
    nan_count: int = 0
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _finite(value) -> bool:
    return value is None or math.isfinite(value)


def _tick_field(spec: ScenarioSpec, tick: TickRecord, cluster_id: int) -> FlowField | None:
    """Reconstruct the flow field steering ``cluster_id`` at this tick."""
    own = [r for r in tick.agents if r.cluster == cluster_id and r.role == "cooperative"]
    if not own:
        return None
    theta = own[0].theta
    beta = own[0].beta
    if theta is None or beta is None:
        return None
    if spec.regime == "TVC":
        marked = [r for r in tick.agents if r.cluster != cluster_id] if beta == 1 else []
    else:
        marked = [r for r in tick.agents if r.role in ("faulty", "noncooperative")]
    sings = tuple(Singularity(r.position, spec.delta_h)
                  for r in sorted(marked, key=lambda r: r.agent_id))
    return FlowField(theta=theta, beta=1 if sings else beta, singularities=sings)


def _epoch_key(spec: ScenarioSpec, tick: TickRecord, index: int):
    if spec.regime == "SNCF":
        return frozenset(r.agent_id for r in tick.agents if r.role == "faulty")
    return index  # time-varying regimes rebuild the field every tick


def audit(log: TrajectoryLog, spec: ScenarioSpec) -> SafetyReport:
    """Quantify the run's safety properties and collect violations."""
    min_sing = None
    min_cross = None
    min_intra = None
    nan_count = 0
    fallback_counts: dict[int, int] = {}
    hold_counts: dict[int, int] = {}

    for tick in log.ticks:
        if tick.min_singularity_distance is not None:
            if min_sing is None or tick.min_singularity_distance < min_sing:
                min_sing = tick.min_singularity_distance
        recs = tick.agents
        for i in range(len(recs)):
            for k in range(i + 1, len(recs)):
                d = abs(recs[i].position - recs[k].position)
                if recs[i].cluster != recs[k].cluster:
                    if min_cross is None or d < min_cross:
                        min_cross = d
                else:
                    if min_intra is None or d < min_intra:
                        min_intra = d
        for rec in recs:
            for value in (rec.x, rec.y, rec.phi, rec.psi, rec.theta):
                if not _finite(value):
                    nan_count += 1
            for fl in rec.flags:
                if fl == "fallback_rk4":
                    fallback_counts[rec.agent_id] = fallback_counts.get(rec.agent_id, 0) + 1
                elif fl.startswith("hold"):
                    hold_counts[rec.agent_id] = hold_counts.get(rec.agent_id, 0) + 1

    max_drift = None
    for idx in range(len(log.ticks) - 1):
        a, b = log.ticks[idx], log.ticks[idx + 1]
        if _epoch_key(spec, a, idx) != _epoch_key(spec, b, idx + 1):
            continue
        next_psi = {r.agent_id: r.psi for r in b.agents}
        for rec in a.agents:
            if rec.psi is None or rec.flags or next_psi.get(rec.agent_id) is None:
                continue
            drift = abs(next_psi[rec.agent_id] - rec.psi)
            if max_drift is None or drift > max_drift:
                max_drift = drift

    max_mismatch = None
    for tick in log.ticks:
        cluster_ids = sorted({r.cluster for r in tick.agents if r.role == "cooperative"})
        for cid in cluster_ids:
            fld = _tick_field(spec, tick, cid)
            if fld is None:
                continue
            for rec in tick.agents:
                if rec.cluster != cid or rec.phi is None or rec.psi is None:
                    continue
                pair = fld.evaluate(rec.position)
                err = abs(complex(pair.phi - rec.phi, pair.psi - rec.psi))
                if max_mismatch is None or err > max_mismatch:
                    max_mismatch = err

    goal_residuals = []
    aggregate = None
    if log.ticks:
        final = {r.agent_id: r.position for r in log.ticks[-1].agents}
        for a in sorted(spec.agents, key=lambda a: a.id):
            if a.goal is not None and a.role == "cooperative" and a.id in final:
                goal_residuals.append((a.id, abs(final[a.id] - a.goal)))
        if goal_residuals:
            aggregate = sum(r for _, r in goal_residuals)

    violations = []
    if nan_count:
        violations.append(f"nan_values: {nan_count} non-finite entries logged")
    if spec.regime == "SNCF":
        if min_sing is not None and min_sing < spec.delta_h - PENETRATION_TOLERANCE:
            violations.append(
                f"cylinder_penetration: min distance to a frozen disk center "
                f"{min_sing:.6g} < {spec.delta_h:.6g} - {PENETRATION_TOLERANCE:g}")
    else:
        if min_cross is not None and min_cross < spec.safety_radius:
            violations.append(
                f"cross_separation: min distance across clusters {min_cross:.6g} "
                f"< safety radius {spec.safety_radius:.6g}")
    if max_mismatch is not None and max_mismatch > LOG_REPRODUCTION_TOLERANCE:
        violations.append(
            f"log_inconsistent: logged (phi, psi) off by {max_mismatch:.3e} "
            f"on re-evaluation")

    return SafetyReport(
        regime=spec.regime,
        n_ticks=len(log.ticks),
        min_singularity_distance=min_sing,
        min_cylinder_clearance=None if min_sing is None else min_sing - spec.delta_h,
        min_cross_distance=min_cross,
        min_intra_distance=min_intra,
        max_psi_drift=max_drift,
        max_log_mismatch=max_mismatch,
        goal_residuals=tuple(goal_residuals),
        aggregate_residual=aggregate,
        fallback_counts=fallback_counts,
        hold_counts=hold_counts,
        nan_count=nan_count,
        violations=tuple(violations),
    )


def format_report(report: SafetyReport) -> str:
    """Stable line-per-metric rendering used by the command-line audit."""

    def num(value):
        return "n/a" if value is None else f"{value:.9g}"

    lines = [
        f"regime                    {report.regime}",
        f"ticks                     {report.n_ticks}",
        f"min_singularity_distance  {num(report.min_singularity_distance)}",
        f"min_cylinder_clearance    {num(report.min_cylinder_clearance)}",
        f"min_cross_distance        {num(report.min_cross_distance)}",
        f"min_intra_distance        {num(report.min_intra_distance)}",
        f"max_psi_drift             {num(report.max_psi_drift)}",
        f"max_log_mismatch          {num(report.max_log_mismatch)}",
        f"aggregate_goal_residual   {num(report.aggregate_residual)}",
    ]
    for agent_id, residual in report.goal_residuals:
        lines.append(f"goal_residual[{agent_id}]          {residual:.9g}")
    total_fallbacks = sum(report.fallback_counts.values())
    total_holds = sum(report.hold_counts.values())
    lines.append(f"fallback_steps            {total_fallbacks}")
    lines.append(f"hold_steps                {total_holds}")
    for message in report.violations:
        lines.append(f"VIOLATION: {message}")
    lines.append(f"status                    {'ok' if report.ok else 'violation'}")
    return "\n".join(lines)
