import cmath
import math

import numpy as np
import pytest

from fluidnav import (
    AgentState,
    AllAtGoal,
    ClusterSpec,
    ScenarioSpec,
    StepBudgetExhausted,
    VirtualBox,
    audit,
    heading_from_goals,
    interpolate_track,
    tvc_run,
    tvnc_run,
    update_betas,
    zeta_check,
)


def agent(aid, cluster, pos, goal=None, role="cooperative"):
    return AgentState(aid, cluster, pos, role=role, goal=goal)


# -- heading law ---------------------------------------------------------------

def test_heading_diagonal():
    agents = [agent(1, 1, 0j, goal=1 + 0j), agent(2, 1, 0j, goal=1j)]
    assert heading_from_goals(agents) == pytest.approx(math.pi / 4)


def test_heading_single_negative_offset():
    agents = [agent(1, 1, 0j, goal=-1 + 0j)]
    assert heading_from_goals(agents) == pytest.approx(math.pi)


def test_heading_cancellation_raises():
    agents = [agent(1, 1, 0j, goal=1 + 0j), agent(2, 1, 0j, goal=-1 + 0j)]
    with pytest.raises(AllAtGoal):
        heading_from_goals(agents)


def test_heading_rotation_equivariance():
    rng = np.random.RandomState(3)
    for _ in range(100):
        n = rng.randint(1, 6)
        agents = [agent(i, 1, complex(*rng.uniform(-2, 2, 2)),
                        goal=complex(*rng.uniform(-2, 2, 2))) for i in range(n)]
        try:
            base = heading_from_goals(agents)
        except AllAtGoal:
            continue
        alpha = float(rng.uniform(-math.pi, math.pi))
        rot = cmath.exp(1j * alpha)
        rotated = [agent(a.id, 1, a.position, goal=a.position + (a.goal - a.position) * rot)
                   for a in agents]
        shifted = heading_from_goals(rotated)
        diff = (shifted - base - alpha + math.pi) % (2 * math.pi) - math.pi
        assert abs(diff) < 1e-12


# -- virtual box and predicate ---------------------------------------------------

def test_box_membership_examples():
    # v=0.3, n_tau=3, dt=0.1: box 0.09 long, half-width 0.15
    box = VirtualBox(anchor=0j, heading=0.0, half_width=0.15, length=0.09)
    assert box.contains(0.05 + 0j)
    assert not box.contains(1 + 0j)
    assert not box.contains(0.05 + 0.2j)
    assert box.contains(0.09 + 0.15j)   # boundary-inclusive
    assert not box.contains(-0.01 + 0j)  # behind the anchor


def test_box_rigid_transform_invariance():
    rng = np.random.RandomState(5)
    for _ in range(200):
        anchor = complex(*rng.uniform(-3, 3, 2))
        heading = float(rng.uniform(-math.pi, math.pi))
        point = complex(*rng.uniform(-3, 3, 2))
        box = VirtualBox(anchor, heading, 0.15, 0.4)
        inside = box.contains(point)
        alpha = float(rng.uniform(-math.pi, math.pi))
        shift = complex(*rng.uniform(-5, 5, 2))
        rot = cmath.exp(1j * alpha)
        moved = VirtualBox(anchor * rot + shift, heading + alpha, 0.15, 0.4)
        assert moved.contains(point * rot + shift) == inside


def zeta_setup(foreign_pos):
    clusters = [ClusterSpec(1, (1,), 0.3, heading=0.0), ClusterSpec(2, (2,), 0.3, heading=math.pi)]
    agents = [agent(1, 1, 0j, goal=5 + 0j), agent(2, 2, foreign_pos, goal=-5 + 0j)]
    return clusters, agents


def test_zeta_examples():
    clusters, agents = zeta_setup(0.05 + 0j)
    assert zeta_check(clusters, agents, delta=0.15, n_tau=3, dt=0.1) is True
    clusters, agents = zeta_setup(1 + 0j)
    assert zeta_check(clusters, agents, delta=0.15, n_tau=3, dt=0.1) is False
    clusters, agents = zeta_setup(0.05 + 0.2j)
    assert zeta_check(clusters, agents, delta=0.15, n_tau=3, dt=0.1) is False


def test_zeta_monotone_in_box_size():
    rng = np.random.RandomState(9)
    for _ in range(100):
        clusters, agents = zeta_setup(complex(*rng.uniform(-0.5, 0.5, 2)))
        delta = float(rng.uniform(0.05, 0.3))
        n_tau = int(rng.randint(1, 5))
        small = zeta_check(clusters, agents, delta=delta, n_tau=n_tau, dt=0.1)
        grown = zeta_check(clusters, agents, delta=delta + rng.uniform(0, 0.3),
                           n_tau=n_tau + rng.randint(0, 3), dt=0.1)
        if small:
            assert grown


def test_update_betas():
    clusters = [ClusterSpec(1, (1,), 0.3), ClusterSpec(2, (2,), 0.3)]
    assert [c.beta for c in update_betas(True, clusters)] == [1, 1]
    assert [c.beta for c in update_betas(False, clusters)] == [0, 0]
    five = [ClusterSpec(i, (i,), 0.3) for i in range(1, 6)]
    assert [c.beta for c in update_betas(False, five)] == [0] * 5


def test_interpolate_track():
    knots = ((0.0, 0.0, 0.0), (10.0, 1.0, 2.0))
    assert interpolate_track(knots, -1.0) == 0j
    assert interpolate_track(knots, 5.0) == 0.5 + 1j
    assert interpolate_track(knots, 20.0) == 1 + 2j


# -- TVNC -----------------------------------------------------------------------

def tvnc_spec(coop, noncoop, tracks, **kw):
    defaults = dict(regime="TVNC", dt=0.1, n_steps=1, agents=tuple(coop + noncoop),
                    noncoop_trajectories=tracks, speed=0.3, delta_h=0.3, epsilon=0.05)
    defaults.update(kw)
    return ScenarioSpec(**defaults)


def test_tvnc_far_obstacles_straight_convergence():
    coop = [agent(1, 1, complex(0, 0.4), goal=complex(2, 0.4)),
            agent(2, 1, complex(0, -0.4), goal=complex(2, -0.4))]
    noncoop = [agent(3, 2, complex(200.0, 200.0), role="noncooperative")]
    tracks = {3: ((0.0, 200.0, 200.0), (100.0, 200.0, 150.0))}
    spec = tvnc_spec(coop, noncoop, tracks)
    log = tvnc_run(spec)
    report = audit(log, spec)
    assert report.aggregate_residual <= 2 * 0.05
    # straight lines: lateral deviation negligible
    for aid, y0 in ((1, 0.4), (2, -0.4)):
        assert all(abs(p.imag - y0) < 1e-4 for p in log.positions_of(aid))


def test_tvnc_already_at_goal_takes_no_step():
    coop = [agent(1, 1, complex(1.0, 0.0), goal=complex(1.0, 0.0))]
    noncoop = [agent(2, 2, complex(50, 50), role="noncooperative")]
    tracks = {2: ((0.0, 50.0, 50.0), (10.0, 50.0, 40.0))}
    spec = tvnc_spec(coop, noncoop, tracks)
    log = tvnc_run(spec)
    assert len(log.ticks) == 1
    assert log.positions_of(1) == [1 + 0j]


def test_tvnc_budget_exhaustion_returns_partial_log():
    # Opposed goals cancel the resultant: the cluster holds until the budget runs out.
    coop = [agent(1, 1, 0j, goal=1 + 0j), agent(2, 1, 0j, goal=-1 + 0j)]
    noncoop = [agent(3, 2, complex(50, 50), role="noncooperative")]
    tracks = {3: ((0.0, 50.0, 50.0), (10.0, 50.0, 40.0))}
    spec = tvnc_spec(coop, noncoop, tracks)
    with pytest.raises(StepBudgetExhausted) as err:
        tvnc_run(spec)
    assert err.value.log is not None
    assert len(err.value.log.ticks) > 1
    assert any(e.kind == "budget_exhausted" for e in err.value.log.events)


def test_tvnc_crossing_keeps_distance_and_converges():
    coop = [agent(1, 1, complex(-1.5, 0.0), goal=complex(1.5, 0.0))]
    noncoop = [agent(2, 2, complex(2.0, 0.3), role="noncooperative")]
    tracks = {2: ((0.0, 2.0, 0.3), (60.0, -10.0, 0.3))}
    spec = tvnc_spec(coop, [noncoop[0]], tracks, delta_h=0.25)
    log = tvnc_run(spec)
    report = audit(log, spec)
    assert report.ok
    assert report.min_cross_distance >= 0.1
    assert report.aggregate_residual <= 0.05


# -- TVC ------------------------------------------------------------------------

def tvc_spec(agents, clusters, **kw):
    defaults = dict(regime="TVC", dt=0.5, n_steps=40, agents=tuple(agents),
                    clusters=tuple(clusters), delta=0.15, n_tau=3, delta_h=0.12,
                    epsilon=0.05)
    defaults.update(kw)
    return ScenarioSpec(**defaults)


def test_tvc_parallel_corridors_never_activate():
    a = [agent(1, 1, complex(-2, 0), goal=complex(2, 0))]
    b = [agent(2, 2, complex(-2, 5), goal=complex(2, 5))]
    spec = tvc_spec(a + b, [ClusterSpec(1, (1,), 0.3), ClusterSpec(2, (2,), 0.3)])
    log = tvc_run(spec)
    assert all(r.beta == 0 for t in log.ticks for r in t.agents)
    for aid, y0 in ((1, 0.0), (2, 5.0)):
        assert all(abs(p.imag - y0) < 1e-12 for p in log.positions_of(aid))


def test_tvc_single_cluster_goal_seeking():
    # The scenario layer rejects m=1, but the runner itself degrades to pure
    # goal seeking when no foreign agents exist.
    a = [agent(1, 1, complex(0, 0), goal=complex(1.2, 0)),
         agent(2, 1, complex(0, 0.5), goal=complex(1.2, 0.5))]
    spec = tvc_spec(a, [ClusterSpec(1, (1, 2), 0.3)], n_steps=12)
    log = tvc_run(spec)
    assert all(r.beta == 0 for t in log.ticks for r in t.agents)
    assert abs(log.positions_of(1)[-1] - complex(1.2, 0)) <= 0.05 + 1e-9


def test_tvc_all_at_goals_zero_motion():
    a = [agent(1, 1, 0j, goal=0j), agent(2, 2, 3 + 0j, goal=3 + 0j)]
    spec = tvc_spec(a, [ClusterSpec(1, (1,), 0.3), ClusterSpec(2, (2,), 0.3)], n_steps=5)
    log = tvc_run(spec)
    assert log.positions_of(1) == [0j] * 6
    assert log.positions_of(2) == [3 + 0j] * 6


def test_tvc_crossing_toggles_beta_and_stays_safe():
    a = [agent(i, 1, complex(-2.0, 0.6 * (i - 1)), goal=complex(2.0, 0.6 * (i - 1)))
         for i in (1, 2, 3)]
    b = [agent(i + 3, 2, complex(2.0, 0.6 * (i - 1) + 0.12),
               goal=complex(-2.0, 0.6 * (i - 1) + 0.12)) for i in (1, 2, 3)]
    spec = tvc_spec(a + b, [ClusterSpec(1, (1, 2, 3), 0.3), ClusterSpec(2, (4, 5, 6), 0.3)],
                    n_steps=70)
    log = tvc_run(spec)
    report = audit(log, spec)
    assert report.ok
    assert report.min_cross_distance >= 0.1
    betas = [t.agents[0].beta for t in log.ticks]
    assert betas[0] == 0 and betas[-1] == 0
    assert 1 in betas
    # beta is common across clusters at every tick (all-ones or all-zeros)
    for tick in log.ticks:
        assert len({r.beta for r in tick.agents}) == 1
