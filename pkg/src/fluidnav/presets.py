"""Bundled demonstration scenarios at the experiment scale.

These are the single source of truth for the shipped scenario files under
``scenarios/`` and for the acceptance suite.  Geometry (initial formations,
goals, obstacle tracks) is chosen so the safety audits pass with margin;
speeds, disk radii, box parameters, and failure times follow the desk-scale
experiment configuration.
"""

from __future__ import annotations

from .clusters import AgentState, FailureEvent
from .guidance import ClusterSpec
from .scenario import ScenarioSpec


def sncf_two_failures() -> ScenarioSpec:
    """Six agents abreast, heading +x; two non-concurrent failures.

    Agents 4 and 5 freeze at t=2 s and t=12 s and are wrapped by 0.4 m
    disks; the remaining agents bend around them and pass downstream.
    """
    lanes = (1.5, 0.9, 0.3, -0.3, -0.9, -1.5)  # 0.6 m spacing, top to bottom
    agents = tuple(
        AgentState(i + 1, 1, complex(0.0, y)) for i, y in enumerate(lanes)
    )
    return ScenarioSpec(
        regime="SNCF",
        dt=0.1,
        n_steps=250,
        agents=agents,
        failures=(FailureEvent(2.0, 4), FailureEvent(12.0, 5)),
        theta=0.0,
        speed=0.3,
        delta_h=0.4,
    )


def tvnc_three_crossing() -> ScenarioSpec:
    """Three goal-seeking agents against three oncoming agents on fixed tracks.

    The non-cooperative tracks run right-to-left through the corridor,
    offset a quarter lane from the goal-seeking lanes; exclusion disks
    follow the moving agents every tick.  The run terminates on the
    aggregate goal-residual condition, so n_steps is nominal here.
    """
    lanes = (-0.7, 0.0, 0.7)
    offset = 0.25
    coop = [
        AgentState(i + 1, 1, complex(-2.0, y), goal=complex(2.0, y))
        for i, y in enumerate(lanes)
    ]
    noncoop = [
        AgentState(i + 4, 2, complex(3.2, y + offset), role="noncooperative")
        for i, y in enumerate(lanes)
    ]
    tracks = {
        i + 4: ((0.0, 3.2, y + offset), (120.0, -14.8, y + offset))
        for i, y in enumerate(lanes)
    }
    return ScenarioSpec(
        regime="TVNC",
        dt=0.1,
        n_steps=1,
        agents=tuple(coop + noncoop),
        noncoop_trajectories=tracks,
        speed=0.3,
        delta_h=0.25,
        epsilon=0.05,
    )


def tvc_two_clusters() -> ScenarioSpec:
    """Two three-agent clusters crossing head-on with interleaved lanes.

    Exclusion switches on only while the forward-looking boxes predict a
    conflict and backs off once the clusters have slipped past each other.
    """
    cluster_a = [
        AgentState(i, 1, complex(-2.0, 0.6 * (i - 1)), goal=complex(2.0, 0.6 * (i - 1)))
        for i in (1, 2, 3)
    ]
    cluster_b = [
        AgentState(i + 3, 2, complex(2.0, 0.6 * (i - 1) + 0.12),
                   goal=complex(-2.0, 0.6 * (i - 1) + 0.12))
        for i in (1, 2, 3)
    ]
    return ScenarioSpec(
        regime="TVC",
        dt=0.5,
        n_steps=70,
        agents=tuple(cluster_a + cluster_b),
        clusters=(
            ClusterSpec(id=1, members=(1, 2, 3), speed=0.3),
            ClusterSpec(id=2, members=(4, 5, 6), speed=0.3),
        ),
        delta=0.15,
        n_tau=3,
        delta_h=0.12,
        epsilon=0.05,
    )


def negative_control() -> ScenarioSpec:
    """Deliberately unsafe: one agent starts inside a frozen unsafe zone."""
    agents = (
        AgentState(1, 1, complex(0.2, 0.0)),  # inside agent 2's disk
        AgentState(2, 2, complex(0.0, 0.0), role="faulty"),
        AgentState(3, 1, complex(0.0, 1.5)),
    )
    return ScenarioSpec(
        regime="SNCF",
        dt=0.1,
        n_steps=20,
        agents=agents,
        theta=0.0,
        speed=0.3,
        delta_h=0.4,
    )


PRESETS = {
    "sncf_two_failures": sncf_two_failures,
    "tvnc_three_crossing": tvnc_three_crossing,
    "tvc_two_clusters": tvc_two_clusters,
    "negative_control": negative_control,
}
