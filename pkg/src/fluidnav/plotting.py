"""Static vector-graphics rendering of trajectory logs.

Figures are emitted as SVG with a fixed hash salt and no date metadata, so
identical inputs produce byte-identical files.  Each agent path and each
unsafe-zone disk carries an SVG group id (``agent-path-N`` /
``unsafe-zone-N``) for downstream tooling.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
from matplotlib.figure import Figure
from matplotlib.patches import Circle

from .errors import FluidNavError
from .logbook import TrajectoryLog
from .scenario import ScenarioSpec

_RC = {
    "svg.hashsalt": "fluidnav",
    "svg.fonttype": "path",
    "path.simplify": False,
}

_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

_DISK_COLORS = ("#2ca02c", "#17becf", "#bcbd22", "#e377c2", "#7f7f7f")


def render_plot(log: TrajectoryLog, spec: ScenarioSpec, path) -> None:
    """Render agent paths, unsafe-zone disks, and goal markers to an SVG file.

    Cooperative paths are solid, non-cooperative ones dashed.  Disks of
    radius delta_h are shaded at the frozen position of every faulty agent
    and the final position of every non-cooperative agent.
    """
    if not log.ticks:
        raise FluidNavError("cannot plot an empty trajectory log")
    path = Path(path)

    with matplotlib.rc_context(_RC):
        fig = Figure(figsize=(7.0, 6.0), dpi=100)
        ax = fig.add_subplot(111)

        agent_ids = log.agent_ids()
        final_roles = {rec.agent_id: rec.role for rec in log.ticks[-1].agents}

        disk_index = 0
        for i, agent_id in enumerate(agent_ids):
            pts = log.positions_of(agent_id)
            xs = [p.real for p in pts]
            ys = [p.imag for p in pts]
            role = final_roles.get(agent_id, "cooperative")
            style = "-" if role == "cooperative" else "--"
            (line,) = ax.plot(xs, ys, style, color=_PALETTE[i % len(_PALETTE)],
                              linewidth=1.4, label=f"agent {agent_id}")
            line.set_gid(f"agent-path-{agent_id}")
            if role in ("faulty", "noncooperative"):
                color = _DISK_COLORS[disk_index % len(_DISK_COLORS)]
                disk = Circle((xs[-1], ys[-1]), radius=spec.delta_h,
                              facecolor=color, edgecolor=color, alpha=0.35,
                              linewidth=1.0)
                disk.set_gid(f"unsafe-zone-{agent_id}")
                ax.add_patch(disk)
                disk_index += 1

        for a in spec.agents:
            if a.goal is None:
                continue
            (marker,) = ax.plot([a.goal.real], [a.goal.imag], marker="*",
                                linestyle="none", markersize=9.0,
                                color=_PALETTE[agent_ids.index(a.id) % len(_PALETTE)]
                                if a.id in agent_ids else "#000000")
            marker.set_gid(f"goal-{a.id}")

        ax.set_xlabel("x [m]")
        ax.set_ylabel("y [m]")
        ax.set_title(f"{spec.regime} trajectories")
        ax.set_aspect("equal", adjustable="datalim")
        ax.grid(True, linewidth=0.3, alpha=0.5)
        ax.legend(loc="upper right", fontsize=8)

        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise FluidNavError(f"cannot write figure {path}: {exc}") from exc
