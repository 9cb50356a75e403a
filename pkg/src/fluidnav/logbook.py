"""Trajectory log records shared by the scenario runners and the IO layer."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class AgentRecord:
    """One agent at one tick.  phi/psi/beta/theta are None for agents that
    are not being steered by a flow field (faulty or non-cooperative)."""

    agent_id: int
    cluster: int
    x: float
    y: float
    phi: float | None
    psi: float | None
    beta: int | None
    theta: float | None
    role: str
    flags: tuple[str, ...] = ()

    @property
    def position(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class TickRecord:
    time: float
    agents: tuple[AgentRecord, ...]  # sorted by agent_id
    min_pair_distance: float | None = None
    min_singularity_distance: float | None = None


@dataclass(frozen=True)
class SimEvent:
    time: float
    kind: str
    agent_id: int | None = None
    detail: str = ""


@dataclass
class TrajectoryLog:
    ticks: list[TickRecord] = field(default_factory=list)
    events: list[SimEvent] = field(default_factory=list)

    @property
    def n_steps(self) -> int:
        return len(self.ticks) - 1

    def positions_of(self, agent_id: int) -> list[complex]:
        out = []
        for tick in self.ticks:
            for rec in tick.agents:
                if rec.agent_id == agent_id:
                    out.append(rec.position)
        return out

    def agent_ids(self) -> list[int]:
        if not self.ticks:
            return []
        return [rec.agent_id for rec in self.ticks[0].agents]


def singular_partners(rec: AgentRecord, records: tuple[AgentRecord, ...]):
    """Records acting as singularities for ``rec`` at this tick.

    Faulty and non-cooperative agents are always singular for cooperative
    agents; when every agent is cooperative (multi-cluster coordination),
    foreign-cluster agents are singular only while rec's beta is 1.
    """
    if rec.role != "cooperative":
        return []
    marked = [r for r in records if r.role in ("faulty", "noncooperative")]
    if marked:
        return marked
    if rec.beta == 1:
        return [r for r in records if r.cluster != rec.cluster]
    return []


def tick_metrics(records: tuple[AgentRecord, ...]):
    """(min pairwise distance, min distance to an active singularity center)."""
    min_pair = None
    for i in range(len(records)):
        for k in range(i + 1, len(records)):
            d = abs(records[i].position - records[k].position)
            if min_pair is None or d < min_pair:
                min_pair = d
    min_sing = None
    for rec in records:
        for partner in singular_partners(rec, records):
            d = abs(rec.position - partner.position)
            if min_sing is None or d < min_sing:
                min_sing = d
    return min_pair, min_sing


def make_tick(time: float, records) -> TickRecord:
    recs = tuple(sorted(records, key=lambda r: r.agent_id))
    for rec in recs:
        if not (math.isfinite(rec.x) and math.isfinite(rec.y)):
            raise ValueError(f"non-finite position for agent {rec.agent_id} at t={time}")
    min_pair, min_sing = tick_metrics(recs)
    return TickRecord(time, recs, min_pair, min_sing)
