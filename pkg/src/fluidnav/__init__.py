"""Deterministic planar multi-agent navigation along potential-flow streamlines.

Cooperative agents slide along stream-function level curves of a complex
potential field whose doublets wrap non-cooperative or failed agents in
virtual exclusion cylinders.  Three regimes are provided: stationary
non-concurrent failures, moving non-cooperative agents on fixed tracks, and
multiple cooperative clusters with box-triggered mutual exclusion.
"""

from .clusters import (
    AgentState,
    FailureEvent,
    Partition,
    apply_failure,
    partition_from_agents,
    sncf_field,
    sncf_run,
)
from .errors import (
    AllAtGoal,
    AlreadyFaulty,
    FluidNavError,
    InsideCylinderWarning,
    InvalidSpec,
    NoConvergence,
    OverlappingDisksWarning,
    RegimeError,
    RootInsideCylinder,
    ScenarioSyntaxError,
    SchemaError,
    SingularPoint,
    StagnationPoint,
    StepBudgetExhausted,
    UnknownAgent,
)
from .field_probe import field_at_time
from .flow_field import FlowField, PotentialStreamPair, Singularity
from .guidance import (
    ClusterSpec,
    VirtualBox,
    heading_from_goals,
    interpolate_track,
    tvc_run,
    tvnc_run,
    update_betas,
    zeta_check,
)
from .kinematics import (
    StepOutcome,
    StepParams,
    TangentVector,
    desired_velocity,
    rk4_step,
    safe_step,
    streamline_step,
    tangent,
)
from .logbook import AgentRecord, SimEvent, TickRecord, TrajectoryLog
from .scenario import ScenarioSpec
from .scenario_io import parse_scenario, scenario_from_dict, scenario_to_dict, write_scenario
from .sim_engine import SafetyReport, audit, format_report, run
from .trajectory_io import (
    GridPoint,
    dump_field_grid,
    read_field_grid,
    read_trajectory,
    write_field_grid,
    write_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "AgentRecord", "AgentState", "AllAtGoal", "AlreadyFaulty", "ClusterSpec",
    "FailureEvent", "FlowField", "FluidNavError", "GridPoint",
    "InsideCylinderWarning", "InvalidSpec", "NoConvergence",
    "OverlappingDisksWarning", "Partition", "PotentialStreamPair",
    "RegimeError", "RootInsideCylinder", "SafetyReport", "ScenarioSpec",
    "ScenarioSyntaxError", "SchemaError", "SimEvent", "SingularPoint",
    "Singularity", "StagnationPoint", "StepBudgetExhausted", "StepOutcome",
    "StepParams", "TangentVector", "TickRecord", "TrajectoryLog",
    "UnknownAgent", "VirtualBox", "apply_failure", "audit",
    "desired_velocity", "dump_field_grid", "field_at_time", "format_report",
    "heading_from_goals", "interpolate_track", "parse_scenario",
    "partition_from_agents", "read_field_grid", "read_trajectory",
    "rk4_step", "run", "safe_step", "scenario_from_dict", "scenario_to_dict",
    "sncf_field", "sncf_run", "streamline_step", "tangent", "tvc_run",
    "tvnc_run", "update_betas", "write_field_grid", "write_scenario",
    "write_trajectory", "zeta_check",
]
