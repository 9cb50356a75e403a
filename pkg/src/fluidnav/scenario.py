"""Scenario specification and its structural validation.

A scenario fixes the regime, the uniform time grid, the agent set, and the
safety parameters.  Regime structure is enforced here: stationary-failure
and non-cooperative runs are two-way splits of the universe, multi-cluster
runs need at least two clusters, and only the stationary regime carries a
fixed heading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .clusters import AgentState, FailureEvent
from .errors import RegimeError, SchemaError
from .guidance import ClusterSpec

REGIMES = ("SNCF", "TVNC", "TVC")


@dataclass(frozen=True)
class ScenarioSpec:
    regime: str
    dt: float
    n_steps: int
    agents: tuple[AgentState, ...]
    t0: float = 0.0
    clusters: tuple[ClusterSpec, ...] = ()
    failures: tuple[FailureEvent, ...] = ()
    noncoop_trajectories: dict = field(default_factory=dict)
    theta: float | None = None
    speed: float = 0.3
    delta_h: float = 0.4
    delta: float = 0.15
    n_tau: int = 3
    epsilon: float = 0.05
    safety_radius: float = 0.1
    dividing_offset: float = 1e-4

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "clusters", tuple(self.clusters))
        object.__setattr__(self, "failures", tuple(self.failures))

    # -- validation -----------------------------------------------------------

    def validate(self) -> None:
        """Raise SchemaError / RegimeError on any structural problem."""
        if self.regime not in REGIMES:
            raise SchemaError("regime", f"must be one of {REGIMES}, got {self.regime!r}")
        if not self.dt > 0:
            raise SchemaError("dt", f"must be > 0, got {self.dt}")
        if self.n_steps < 1:
            raise SchemaError("n_steps", f"must be >= 1, got {self.n_steps}")
        for name in ("speed", "delta_h", "delta", "epsilon", "safety_radius"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise SchemaError(name, f"must be finite and >= 0, got {value}")
        if self.n_tau < 1:
            raise SchemaError("n_tau", f"must be >= 1, got {self.n_tau}")
        if not self.agents:
            raise SchemaError("agents", "at least one agent is required")

        ids = [a.id for a in self.agents]
        if len(set(ids)) != len(ids):
            raise SchemaError("agents", f"duplicate agent ids in {sorted(ids)}")
        for a in self.agents:
            if not (math.isfinite(a.position.real) and math.isfinite(a.position.imag)):
                raise SchemaError(f"agents[{a.id}].position", "must be finite")

        getattr(self, f"_validate_{self.regime.lower()}")()

    def _validate_sncf(self) -> None:
        if self.theta is None:
            raise SchemaError("theta", "SNCF requires a constant heading")
        if self.noncoop_trajectories:
            raise RegimeError("SNCF partition", "predefined trajectories are a TVNC feature")
        if self.clusters:
            raise RegimeError("SNCF m=2", "explicit clusters are a TVC feature; the "
                              "healthy/faulty split is implicit")
        ids = {a.id for a in self.agents}
        seen = set()
        for ev in self.failures:
            if ev.agent_id not in ids:
                raise SchemaError("failures", f"unknown agent {ev.agent_id}")
            if ev.agent_id in seen:
                raise SchemaError("failures", f"agent {ev.agent_id} fails twice")
            if ev.time < self.t0:
                raise SchemaError("failures", f"failure at t={ev.time} precedes t0={self.t0}")
            seen.add(ev.agent_id)
        for a in self.agents:
            if a.role == "noncooperative":
                raise RegimeError("SNCF partition", f"agent {a.id} is noncooperative; "
                                  "SNCF splits into cooperative and faulty only")
            if a.role == "faulty" and a.id in seen:
                raise SchemaError("failures", f"agent {a.id} is already faulty at t0")
            want = 2 if a.role == "faulty" else 1
            if a.cluster != want:
                raise SchemaError(f"agents[{a.id}].cluster",
                                  f"{a.role} agents belong to cluster {want}")

    def _validate_tvnc(self) -> None:
        if self.theta is not None:
            raise RegimeError("TVNC theta time-varying",
                              "a fixed heading cannot be declared; it is recomputed per tick")
        if self.failures:
            raise RegimeError("TVNC partition time-invariant", "failures are an SNCF feature")
        if self.clusters:
            raise RegimeError("TVNC m=2", "explicit clusters are a TVC feature")
        coop = [a for a in self.agents if a.role == "cooperative"]
        noncoop = [a for a in self.agents if a.role == "noncooperative"]
        if len(coop) + len(noncoop) != len(self.agents):
            raise RegimeError("TVNC partition", "roles must be cooperative or noncooperative")
        if not coop or not noncoop:
            raise RegimeError("TVNC m=2", "both a cooperative and a non-cooperative "
                              "set are required")
        for a in coop:
            if a.goal is None:
                raise SchemaError(f"agents[{a.id}].goal", "cooperative agents need a goal")
            if a.cluster != 1:
                raise SchemaError(f"agents[{a.id}].cluster", "cooperative agents are cluster 1")
        for a in noncoop:
            if a.cluster != 2:
                raise SchemaError(f"agents[{a.id}].cluster",
                                  "non-cooperative agents are cluster 2")
            track = self.noncoop_trajectories.get(a.id)
            if not track:
                raise SchemaError("noncoop_trajectories", f"missing track for agent {a.id}")
            times = [knot[0] for knot in track]
            if times != sorted(times):
                raise SchemaError("noncoop_trajectories",
                                  f"track times for agent {a.id} must be non-decreasing")
        extra = set(self.noncoop_trajectories) - {a.id for a in noncoop}
        if extra:
            raise SchemaError("noncoop_trajectories", f"tracks for unknown agents {sorted(extra)}")

    def _validate_tvc(self) -> None:
        if self.theta is not None:
            raise RegimeError("TVC theta time-varying",
                              "a fixed heading cannot be declared; it is recomputed per tick")
        if self.failures:
            raise RegimeError("TVC partition time-invariant", "failures are an SNCF feature")
        if self.noncoop_trajectories:
            raise RegimeError("TVC partition", "predefined trajectories are a TVNC feature")
        if len(self.clusters) < 2:
            raise RegimeError("TVC m>1", f"at least two clusters are required, "
                              f"got {len(self.clusters)}")
        cluster_ids = [c.id for c in self.clusters]
        if len(set(cluster_ids)) != len(cluster_ids):
            raise SchemaError("clusters", "duplicate cluster ids")
        assigned: dict[int, int] = {}
        for c in self.clusters:
            if not c.speed >= 0:
                raise SchemaError(f"clusters[{c.id}].speed", "must be >= 0")
            for m in c.members:
                if m in assigned:
                    raise SchemaError("clusters", f"agent {m} in clusters "
                                      f"{assigned[m]} and {c.id}")
                assigned[m] = c.id
        ids = {a.id for a in self.agents}
        if set(assigned) != ids:
            raise SchemaError("clusters", f"members {sorted(assigned)} do not "
                              f"partition the agent set {sorted(ids)}")
        for a in self.agents:
            if a.role != "cooperative":
                raise RegimeError("TVC partition", f"agent {a.id}: every agent is "
                                  "cooperative within its own cluster")
            if a.cluster != assigned[a.id]:
                raise SchemaError(f"agents[{a.id}].cluster",
                                  f"does not match cluster membership {assigned[a.id]}")
            if a.goal is None:
                raise SchemaError(f"agents[{a.id}].goal", "every agent needs a goal")

    # -- helpers ----------------------------------------------------------------

    def agent(self, agent_id: int) -> AgentState:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise KeyError(agent_id)

    def duration(self) -> float:
        return self.n_steps * self.dt
