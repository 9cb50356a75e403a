"""Agent universe, failure bookkeeping, and the stationary-failure runner.

Failures split the agent set into a healthy and a faulty part.  Every faulty
agent freezes at its failure-time position and is wrapped by an excluded
disk; the flow field is rebuilt only when the faulty set changes, so it is
piece-wise time-invariant between failure events.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from .errors import AlreadyFaulty, SingularPoint, UnknownAgent
from .flow_field import FlowField, Singularity
from .kinematics import StepParams, safe_step
from .logbook import AgentRecord, SimEvent, TrajectoryLog, make_tick

if TYPE_CHECKING:
    from .scenario import ScenarioSpec

ROLES = ("cooperative", "faulty", "noncooperative")
DIVIDING_TOLERANCE = 1e-6  # flag agents this close in psi to a new dividing streamline


@dataclass(frozen=True)
class AgentState:
    id: int
    cluster: int
    position: complex
    role: str = "cooperative"
    goal: complex | None = None

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")


@dataclass(frozen=True)
class FailureEvent:
    time: float
    agent_id: int


@dataclass(frozen=True)
class Partition:
    """Healthy/faulty split of the agent universe at some time."""

    healthy: frozenset[int]
    faulty: frozenset[int]
    t_fail: float = 0.0  # most recent time the failure status changed

    def __post_init__(self):
        overlap = self.healthy & self.faulty
        if overlap:
            raise ValueError(f"agents {sorted(overlap)} are both healthy and faulty")


def partition_from_agents(agents, t0: float = 0.0) -> Partition:
    healthy = frozenset(a.id for a in agents if a.role != "faulty")
    faulty = frozenset(a.id for a in agents if a.role == "faulty")
    return Partition(healthy, faulty, t_fail=t0)


def apply_failure(partition: Partition, event: FailureEvent, agents):
    """Move one agent from the healthy to the faulty set.

    Returns the updated partition and agent list; the agent's role flips to
    faulty (and its cluster to 2, the faulty side of the two-way split) and
    its position stays frozen at the current value.
    """
    ids = {a.id for a in agents}
    if event.agent_id not in ids:
        raise UnknownAgent(f"agent {event.agent_id} not in the universe")
    if event.agent_id in partition.faulty:
        raise AlreadyFaulty(f"agent {event.agent_id} already failed")
    new_partition = Partition(
        partition.healthy - {event.agent_id},
        partition.faulty | {event.agent_id},
        t_fail=event.time,
    )
    new_agents = [
        replace(a, role="faulty", cluster=2) if a.id == event.agent_id else a
        for a in agents
    ]
    return new_partition, new_agents


def sncf_field(partition: Partition, agents, theta: float, delta: float) -> FlowField:
    """Field excluding every faulty agent with a disk of radius ``delta``."""
    pos = {a.id: a.position for a in agents}
    sings = tuple(Singularity(pos[h], delta) for h in sorted(partition.faulty))
    return FlowField(theta=theta, beta=1, singularities=sings)


def _boundary_psi(field: FlowField, sing: Singularity) -> float:
    """Stream value on the disk boundary, sampled at the cross-flow top."""
    z_top = sing.center + 1j * sing.radius * cmath.exp(1j * field.theta)
    return field.evaluate(z_top).psi


def _dividing_shifts(field: FlowField, agents, healthy, offset: float,
                     events, time: float) -> dict[int, float]:
    """One-shot psi nudges for agents sitting on a disk's dividing streamline."""
    shifts: dict[int, float] = {}
    if offset == 0.0 or not field.singularities:
        return shifts
    boundary_values = [_boundary_psi(field, s) for s in field.singularities]
    for a in agents:
        if a.id not in healthy:
            continue
        try:
            psi = field.evaluate(a.position).psi
        except SingularPoint:
            continue
        if any(abs(psi - b) <= DIVIDING_TOLERANCE for b in boundary_values):
            shifts[a.id] = offset
            events.append(SimEvent(time, "psi_offset", a.id, f"{offset:g}"))
    return shifts


def sncf_run(scenario: "ScenarioSpec", agents=None) -> TrajectoryLog:
    """Stationary non-concurrent failure coordination over the scenario grid.

    At every tick where the faulty set changed, the field is rebuilt around
    the frozen failure positions; healthy agents then slide one step along
    their stream lines.  Per-agent stepping problems degrade to holds and
    are logged, never propagated.
    """
    agents = sorted(agents if agents is not None else scenario.agents, key=lambda a: a.id)
    theta = scenario.theta if scenario.theta is not None else 0.0
    params = StepParams(scenario.dt, scenario.speed)
    partition = partition_from_agents(agents, scenario.t0)

    by_tick: dict[int, list[FailureEvent]] = {}
    for ev in scenario.failures:
        k = round((ev.time - scenario.t0) / scenario.dt)
        if 0 <= k <= scenario.n_steps:
            by_tick.setdefault(k, []).append(ev)

    log = TrajectoryLog()
    field = sncf_field(partition, agents, theta, scenario.delta_h)
    shifts = _dividing_shifts(field, agents, partition.healthy,
                              scenario.dividing_offset, log.events, scenario.t0)
    fail_flags: set[int] = set()

    for k in range(scenario.n_steps + 1):
        t_k = scenario.t0 + k * scenario.dt
        if k in by_tick:
            for ev in sorted(by_tick[k], key=lambda e: e.agent_id):
                partition, agents = apply_failure(partition, replace(ev, time=t_k), agents)
                log.events.append(SimEvent(t_k, "failure", ev.agent_id))
                fail_flags.add(ev.agent_id)
            field = sncf_field(partition, agents, theta, scenario.delta_h)
            log.events.append(SimEvent(t_k, "field_rebuild", None, f"{len(field.singularities)} disks"))
            shifts = _dividing_shifts(field, agents, partition.healthy,
                                      scenario.dividing_offset, log.events, t_k)

        records = []
        step_flags: dict[int, tuple[str, ...]] = {}
        for a in agents:
            flags: list[str] = []
            if a.id in fail_flags:
                flags.append("fail")
            if a.id in partition.healthy:
                phi = psi = None
                try:
                    pair = field.evaluate(a.position)
                    phi, psi = pair.phi, pair.psi
                except SingularPoint:
                    flags.append("singular_eval")
                records.append(AgentRecord(a.id, a.cluster, a.position.real, a.position.imag,
                                           phi, psi, field.effective_beta, theta, a.role,
                                           tuple(flags)))
            else:
                records.append(AgentRecord(a.id, a.cluster, a.position.real, a.position.imag,
                                           None, None, None, None, a.role, tuple(flags)))
            step_flags[a.id] = ()
        fail_flags.clear()

        if k < scenario.n_steps:
            new_agents = []
            for a in agents:
                if a.id not in partition.healthy:
                    new_agents.append(a)
                    continue
                shift = shifts.pop(a.id, 0.0)
                outcome = safe_step(a.position, field, params, psi_shift=shift)
                flags = outcome.flags + (("psi_offset",) if shift else ())
                for fl in outcome.flags:
                    log.events.append(SimEvent(t_k, fl, a.id))
                step_flags[a.id] = flags
                new_agents.append(replace(a, position=outcome.position))
            # step flags belong to the tick the step departed from
            records = [replace(r, flags=r.flags + step_flags[r.agent_id]) for r in records]
            agents = new_agents

        log.ticks.append(make_tick(t_k, records))

    return log
