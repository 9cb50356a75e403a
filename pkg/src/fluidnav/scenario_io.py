"""Scenario file parsing and serialization (YAML, schema version 1).

Units throughout: positions in meters, times in seconds, angles in radians.
Unknown keys are rejected so typos never silently change a run.
"""

from __future__ import annotations

from pathlib import Path

import yaml

from .clusters import AgentState, FailureEvent
from .errors import ScenarioSyntaxError, SchemaError
from .guidance import ClusterSpec
from .scenario import ScenarioSpec

SCHEMA_VERSION = 1

_TOP_KEYS = {
    "version", "regime", "t0", "dt", "n_steps", "theta", "speed", "delta_h",
    "delta", "n_tau", "epsilon", "safety_radius", "dividing_offset",
    "agents", "failures", "noncoop_trajectories", "clusters",
}
_AGENT_KEYS = {"id", "cluster", "position", "role", "goal"}
_FAILURE_KEYS = {"time", "agent_id"}
_CLUSTER_KEYS = {"id", "members", "speed"}


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise SchemaError(f"{where}.{key}" if where else key, "missing required field")
    return mapping[key]


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        label = f"{where}.{sorted(unknown)[0]}" if where else sorted(unknown)[0]
        raise SchemaError(label, "unknown field")


def _number(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(field, f"expected a number, got {value!r}")
    return float(value)


def _integer(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(field, f"expected an integer, got {value!r}")
    return value


def _point(value, field: str) -> complex:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)):
        raise SchemaError(field, f"expected [x, y], got {value!r}")
    return complex(float(value[0]), float(value[1]))


def _parse_agent(entry, index: int) -> AgentState:
    where = f"agents[{index}]"
    if not isinstance(entry, dict):
        raise SchemaError(where, f"expected a mapping, got {entry!r}")
    _reject_unknown(entry, _AGENT_KEYS, where)
    agent_id = _integer(_require(entry, "id", where), f"{where}.id")
    cluster = _integer(_require(entry, "cluster", where), f"{where}.cluster")
    position = _point(_require(entry, "position", where), f"{where}.position")
    role = entry.get("role", "cooperative")
    if role not in ("cooperative", "faulty", "noncooperative"):
        raise SchemaError(f"{where}.role", f"unknown role {role!r}")
    goal = _point(entry["goal"], f"{where}.goal") if "goal" in entry else None
    return AgentState(agent_id, cluster, position, role, goal)


def _parse_failure(entry, index: int) -> FailureEvent:
    where = f"failures[{index}]"
    if not isinstance(entry, dict):
        raise SchemaError(where, f"expected a mapping, got {entry!r}")
    _reject_unknown(entry, _FAILURE_KEYS, where)
    return FailureEvent(
        _number(_require(entry, "time", where), f"{where}.time"),
        _integer(_require(entry, "agent_id", where), f"{where}.agent_id"),
    )


def _parse_cluster(entry, index: int) -> ClusterSpec:
    where = f"clusters[{index}]"
    if not isinstance(entry, dict):
        raise SchemaError(where, f"expected a mapping, got {entry!r}")
    _reject_unknown(entry, _CLUSTER_KEYS, where)
    members = _require(entry, "members", where)
    if not isinstance(members, list) or not members:
        raise SchemaError(f"{where}.members", "expected a non-empty list of agent ids")
    return ClusterSpec(
        id=_integer(_require(entry, "id", where), f"{where}.id"),
        members=tuple(_integer(m, f"{where}.members") for m in members),
        speed=_number(_require(entry, "speed", where), f"{where}.speed"),
    )


def _parse_tracks(value) -> dict:
    if not isinstance(value, dict):
        raise SchemaError("noncoop_trajectories", f"expected a mapping, got {value!r}")
    tracks = {}
    for key, knots in value.items():
        if isinstance(key, str) and key.isdigit():
            key = int(key)
        agent_id = _integer(key, f"noncoop_trajectories.{key}")
        if not isinstance(knots, list) or not knots:
            raise SchemaError(f"noncoop_trajectories.{key}", "expected a list of [t, x, y]")
        parsed = []
        for i, knot in enumerate(knots):
            if (not isinstance(knot, list) or len(knot) != 3
                    or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in knot)):
                raise SchemaError(f"noncoop_trajectories.{key}[{i}]",
                                  f"expected [t, x, y], got {knot!r}")
            parsed.append((float(knot[0]), float(knot[1]), float(knot[2])))
        tracks[agent_id] = tuple(parsed)
    return tracks


def scenario_from_dict(data) -> ScenarioSpec:
    """Build and validate a ScenarioSpec from a plain mapping."""
    if not isinstance(data, dict):
        raise SchemaError("document", f"expected a mapping, got {type(data).__name__}")
    _reject_unknown(data, _TOP_KEYS, "")
    version = _integer(_require(data, "version", ""), "version")
    if version != SCHEMA_VERSION:
        raise SchemaError("version", f"unsupported schema version {version}")

    regime = _require(data, "regime", "")
    agents_raw = _require(data, "agents", "")
    if not isinstance(agents_raw, list):
        raise SchemaError("agents", "expected a list")

    spec = ScenarioSpec(
        regime=regime,
        t0=_number(data.get("t0", 0.0), "t0"),
        dt=_number(data.get("dt", 0.1), "dt"),
        n_steps=_integer(_require(data, "n_steps", ""), "n_steps"),
        agents=tuple(_parse_agent(a, i) for i, a in enumerate(agents_raw)),
        clusters=tuple(_parse_cluster(c, i) for i, c in enumerate(data.get("clusters", []))),
        failures=tuple(_parse_failure(f, i) for i, f in enumerate(data.get("failures", []))),
        noncoop_trajectories=_parse_tracks(data.get("noncoop_trajectories", {})),
        theta=None if data.get("theta") is None else _number(data["theta"], "theta"),
        speed=_number(data.get("speed", 0.3), "speed"),
        delta_h=_number(data.get("delta_h", 0.4), "delta_h"),
        delta=_number(data.get("delta", 0.15), "delta"),
        n_tau=_integer(data.get("n_tau", 3), "n_tau"),
        epsilon=_number(data.get("epsilon", 0.05), "epsilon"),
        safety_radius=_number(data.get("safety_radius", 0.1), "safety_radius"),
        dividing_offset=_number(data.get("dividing_offset", 1e-4), "dividing_offset"),
    )
    spec.validate()
    return spec


def parse_scenario(path) -> ScenarioSpec:
    """Parse and fully validate a scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioSyntaxError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        line = None if mark is None else mark.line + 1
        column = None if mark is None else mark.column + 1
        raise ScenarioSyntaxError(f"{path}: {exc.problem or 'invalid syntax'}",
                                  line, column) from exc
    except yaml.YAMLError as exc:
        raise ScenarioSyntaxError(f"{path}: {exc}") from exc
    return scenario_from_dict(data)


def scenario_to_dict(spec: ScenarioSpec) -> dict:
    data: dict = {
        "version": SCHEMA_VERSION,
        "regime": spec.regime,
        "t0": spec.t0,
        "dt": spec.dt,
        "n_steps": spec.n_steps,
    }
    if spec.theta is not None:
        data["theta"] = spec.theta
    data.update(
        speed=spec.speed,
        delta_h=spec.delta_h,
        delta=spec.delta,
        n_tau=spec.n_tau,
        epsilon=spec.epsilon,
        safety_radius=spec.safety_radius,
        dividing_offset=spec.dividing_offset,
    )
    agents = []
    for a in spec.agents:
        entry: dict = {"id": a.id, "cluster": a.cluster,
                       "position": [a.position.real, a.position.imag]}
        if a.role != "cooperative":
            entry["role"] = a.role
        if a.goal is not None:
            entry["goal"] = [a.goal.real, a.goal.imag]
        agents.append(entry)
    data["agents"] = agents
    if spec.failures:
        data["failures"] = [{"time": f.time, "agent_id": f.agent_id} for f in spec.failures]
    if spec.noncoop_trajectories:
        data["noncoop_trajectories"] = {
            agent_id: [[t, x, y] for t, x, y in knots]
            for agent_id, knots in sorted(spec.noncoop_trajectories.items())
        }
    if spec.clusters:
        data["clusters"] = [{"id": c.id, "members": list(c.members), "speed": c.speed}
                            for c in spec.clusters]
    return data


def write_scenario(spec: ScenarioSpec, path) -> None:
    path = Path(path)
    text = yaml.safe_dump(scenario_to_dict(spec), sort_keys=False, default_flow_style=None)
    try:
        path.write_text(text)
    except OSError as exc:
        raise ScenarioSyntaxError(f"cannot write scenario file {path}: {exc}") from exc
