"""Reconstruct the flow field a cluster was steered by at a given time."""

from __future__ import annotations

from .errors import FluidNavError, StepBudgetExhausted
from .flow_field import FlowField
from .scenario import ScenarioSpec
from .sim_engine import _tick_field, run


def field_at_time(spec: ScenarioSpec, t: float, cluster_id: int = 1) -> FlowField:
    """Run the scenario and rebuild the field active at the tick nearest ``t``.

    Frozen failure positions and moving singularity positions are only known
    by running, so the probe replays the (deterministic) scenario first.
    """
    try:
        log = run(spec)
    except StepBudgetExhausted as exc:
        log = exc.log
    if not log.ticks:
        raise FluidNavError("scenario produced an empty log")
    k = round((t - spec.t0) / spec.dt)
    k = max(0, min(k, len(log.ticks) - 1))
    field = _tick_field(spec, log.ticks[k], cluster_id)
    if field is None:
        raise FluidNavError(f"no steered agents in cluster {cluster_id} at t={t}")
    return field
