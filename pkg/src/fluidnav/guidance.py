"""Goal-directed heading, conflict prediction boxes, and time-varying runners.

Covers the two regimes where singularities move: non-cooperative agents on
predefined trajectories (exclusion always active) and multiple cooperative
clusters (exclusion switched on by the virtual-box predicate and off again
once no foreign agent is predicted ahead).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from .errors import AllAtGoal, SingularPoint, StepBudgetExhausted
from .flow_field import FlowField, Singularity
from .kinematics import StepParams, safe_step
from .logbook import AgentRecord, SimEvent, TrajectoryLog, make_tick

if TYPE_CHECKING:
    from .clusters import AgentState
    from .scenario import ScenarioSpec

RESULTANT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ClusterSpec:
    """One cluster: member ids, sliding speed, and its runtime switches."""

    id: int
    members: tuple[int, ...]
    speed: float
    beta: int = 0
    heading: float | None = None
    goal_tolerance: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members)))
        if not self.members:
            raise ValueError(f"cluster {self.id} has no members")
        if self.beta not in (0, 1):
            raise ValueError(f"cluster {self.id}: beta must be 0 or 1")


@dataclass(frozen=True)
class VirtualBox:
    """Forward-looking rectangle: rear edge centered at the anchor, extending
    ``length`` along ``heading`` with ``half_width`` to each side."""

    anchor: complex
    heading: float
    half_width: float
    length: float

    def contains(self, point: complex) -> bool:
        w = (point - self.anchor) * cmath.exp(-1j * self.heading)
        return 0.0 <= w.real <= self.length and abs(w.imag) <= self.half_width


def heading_from_goals(agents) -> float:
    """Bulk motion direction: principal argument of the summed goal offsets."""
    resultant = 0j
    for a in agents:
        if a.goal is None:
            raise ValueError(f"agent {a.id} has no goal")
        resultant += a.goal - a.position
    if abs(resultant) <= RESULTANT_TOLERANCE:
        raise AllAtGoal(f"goal-offset resultant {abs(resultant):.3e} is numerically zero")
    return cmath.phase(resultant)


def zeta_check(clusters, agents, delta: float, n_tau: int, dt: float) -> bool:
    """True iff any foreign agent sits in some member's virtual box."""
    by_cluster: dict[int, list] = {}
    for a in agents:
        by_cluster.setdefault(a.cluster, []).append(a)
    for cluster in sorted(clusters, key=lambda c: c.id):
        if cluster.heading is None:
            raise ValueError(f"cluster {cluster.id} has no current heading")
        length = cluster.speed * n_tau * dt
        members = by_cluster.get(cluster.id, [])
        foreign = [a for a in agents if a.cluster != cluster.id]
        for member in members:
            box = VirtualBox(member.position, cluster.heading, delta, length)
            for other in foreign:
                if box.contains(other.position):
                    return True
    return False


def update_betas(zeta: bool, clusters):
    """All-ones when the predicate holds, all-zeros otherwise."""
    value = 1 if zeta else 0
    return [replace(c, beta=value) for c in clusters]


def _log_event_flags(log: TrajectoryLog, t: float, agent_id: int, flags) -> None:
    for fl in flags:
        log.events.append(SimEvent(t, fl, agent_id))


def tvnc_run(scenario: "ScenarioSpec", agents=None, noncoop_trajectories=None) -> TrajectoryLog:
    """Cooperative agents slide toward goals around moving non-cooperative ones.

    The heading and the singularity positions are refreshed every tick; the
    loop runs until the aggregate goal residual drops to |V1| * epsilon or the
    step budget (10x the nominal step count) is exhausted.  Agents within
    epsilon of their own goal are frozen to prevent overshoot oscillation.
    """
    agents = sorted(agents if agents is not None else scenario.agents, key=lambda a: a.id)
    trajectories = (noncoop_trajectories if noncoop_trajectories is not None
                    else scenario.noncoop_trajectories)
    coop = [a for a in agents if a.role == "cooperative"]
    noncoop_ids = sorted(a.id for a in agents if a.role == "noncooperative")
    params = StepParams(scenario.dt, scenario.speed)
    eps = scenario.epsilon

    nominal = sum(abs(a.goal - a.position) for a in coop)
    expected = max(1, math.ceil(nominal / (max(len(coop), 1) * scenario.speed * scenario.dt)))
    budget = 10 * expected

    log = TrajectoryLog()
    theta = 0.0
    k = 0
    while True:
        t_k = scenario.t0 + k * scenario.dt
        positions = {a.id: a.position for a in agents}
        for nid in noncoop_ids:
            positions[nid] = interpolate_track(trajectories[nid], t_k)
        agents = [replace(a, position=positions[a.id]) for a in agents]
        coop = [a for a in agents if a.role == "cooperative"]

        heading_hold = False
        try:
            theta = heading_from_goals(coop)
        except AllAtGoal:
            heading_hold = True  # keep last heading, hold everyone this tick

        sings = tuple(Singularity(positions[nid], scenario.delta_h) for nid in noncoop_ids)
        field = FlowField(theta=theta, beta=1, singularities=sings)

        records = []
        frozen: set[int] = set()
        for a in agents:
            if a.role != "cooperative":
                records.append(AgentRecord(a.id, a.cluster, a.position.real, a.position.imag,
                                           None, None, None, None, a.role))
                continue
            flags: list[str] = []
            if abs(a.goal - a.position) <= eps:
                frozen.add(a.id)
                flags.append("frozen_at_goal")
            if heading_hold:
                flags.append("hold_heading")
            phi = psi = None
            try:
                pair = field.evaluate(a.position)
                phi, psi = pair.phi, pair.psi
            except SingularPoint:
                flags.append("singular_eval")
            records.append(AgentRecord(a.id, a.cluster, a.position.real, a.position.imag,
                                       phi, psi, field.effective_beta, theta, a.role,
                                       tuple(flags)))

        residual = sum(abs(a.goal - a.position) for a in coop)
        done = residual <= len(coop) * eps

        if done or k >= budget:
            log.ticks.append(make_tick(t_k, records))
            if not done:
                log.events.append(SimEvent(t_k, "budget_exhausted", None,
                                           f"residual {residual:.6g}"))
                raise StepBudgetExhausted(
                    f"aggregate residual {residual:.6g} > {len(coop) * eps:.6g} "
                    f"after {k} steps", log)
            break

        step_flags: dict[int, tuple[str, ...]] = {}
        new_agents = []
        for a in agents:
            if a.role != "cooperative" or a.id in frozen or heading_hold:
                new_agents.append(a)
                continue
            outcome = safe_step(a.position, field, params)
            _log_event_flags(log, t_k, a.id, outcome.flags)
            step_flags[a.id] = outcome.flags
            new_agents.append(replace(a, position=outcome.position))
        records = [replace(r, flags=r.flags + step_flags.get(r.agent_id, ())) for r in records]
        log.ticks.append(make_tick(t_k, records))
        agents = new_agents
        k += 1

    return log


def tvc_run(scenario: "ScenarioSpec", agents=None) -> TrajectoryLog:
    """Multi-cluster coordination with box-triggered mutual exclusion.

    Every tick: refresh each cluster's heading from its goal offsets,
    evaluate the box predicate once globally, set every cluster's beta
    accordingly, rebuild each cluster's field (foreign agents become
    singularities only while beta is 1), then step all members from the
    tick-start snapshot.
    """
    agents = sorted(agents if agents is not None else scenario.agents, key=lambda a: a.id)
    clusters = [replace(c, goal_tolerance=scenario.epsilon)
                for c in sorted(scenario.clusters, key=lambda c: c.id)]
    eps = scenario.epsilon

    log = TrajectoryLog()
    prev_zeta = False
    for k in range(scenario.n_steps + 1):
        t_k = scenario.t0 + k * scenario.dt
        positions = {a.id: a.position for a in agents}
        by_cluster = {c.id: [a for a in agents if a.cluster == c.id] for c in clusters}

        held_clusters: set[int] = set()
        updated = []
        for c in clusters:
            try:
                heading = heading_from_goals(by_cluster[c.id])
            except AllAtGoal:
                heading = c.heading if c.heading is not None else 0.0
                held_clusters.add(c.id)
            updated.append(replace(c, heading=heading))
        clusters = updated

        zeta = zeta_check(clusters, agents, scenario.delta, scenario.n_tau, scenario.dt)
        clusters = update_betas(zeta, clusters)
        if zeta != prev_zeta:
            log.events.append(SimEvent(t_k, "zeta_on" if zeta else "zeta_off"))
            prev_zeta = zeta

        fields: dict[int, FlowField] = {}
        for c in clusters:
            if c.beta == 1:
                foreign = sorted(a.id for a in agents if a.cluster != c.id)
                sings = tuple(Singularity(positions[j], scenario.delta_h) for j in foreign)
            else:
                sings = ()
            fields[c.id] = FlowField(theta=c.heading, beta=c.beta, singularities=sings)

        records = []
        frozen: set[int] = set()
        for a in agents:
            c = next(c for c in clusters if c.id == a.cluster)
            field = fields[a.cluster]
            flags: list[str] = []
            if a.goal is not None and abs(a.goal - a.position) <= eps:
                frozen.add(a.id)
                flags.append("frozen_at_goal")
            if a.cluster in held_clusters:
                flags.append("hold_heading")
            phi = psi = None
            try:
                pair = field.evaluate(a.position)
                phi, psi = pair.phi, pair.psi
            except SingularPoint:
                flags.append("singular_eval")
            records.append(AgentRecord(a.id, a.cluster, a.position.real, a.position.imag,
                                       phi, psi, c.beta, c.heading, a.role, tuple(flags)))

        if k < scenario.n_steps:
            step_flags: dict[int, tuple[str, ...]] = {}
            new_agents = []
            for a in agents:
                c = next(c for c in clusters if c.id == a.cluster)
                if a.id in frozen or a.cluster in held_clusters:
                    new_agents.append(a)
                    continue
                outcome = safe_step(a.position, fields[a.cluster],
                                    StepParams(scenario.dt, c.speed))
                _log_event_flags(log, t_k, a.id, outcome.flags)
                step_flags[a.id] = outcome.flags
                new_agents.append(replace(a, position=outcome.position))
            records = [replace(r, flags=r.flags + step_flags.get(r.agent_id, ()))
                       for r in records]
            agents = new_agents

        log.ticks.append(make_tick(t_k, records))

    return log


def interpolate_track(knots, t: float) -> complex:
    """Piecewise-linear position on a time-indexed track, clamped at the ends."""
    if not knots:
        raise ValueError("empty trajectory")
    if t <= knots[0][0]:
        return complex(knots[0][1], knots[0][2])
    for (t0, x0, y0), (t1, x1, y1) in zip(knots, knots[1:]):
        if t <= t1:
            if t1 == t0:
                return complex(x1, y1)
            w = (t - t0) / (t1 - t0)
            return complex(x0 + w * (x1 - x0), y0 + w * (y1 - y0))
    return complex(knots[-1][1], knots[-1][2])
