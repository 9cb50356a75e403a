import cmath
import math
import warnings

import numpy as np
import pytest

from fluidnav import (
    FlowField,
    InsideCylinderWarning,
    NoConvergence,
    OverlappingDisksWarning,
    RootInsideCylinder,
    SingularPoint,
    Singularity,
)

from conftest import random_field, sample_exterior

# High-precision reference values for the rotated one-disk field
# (theta=pi/4, center 1, radius 0.4), computed with 50-digit arithmetic.
ROTATED_AT_2_1J = complex(1.5273506473629426527, 0.0)
ROTATED_AT_2_2J = complex(2.1892025945535511355, 0.68447936418857800362)
# Two disks (1, r=0.4) and (-1j, r=0.25), theta=0.3, z=-1+2j.
MULTI_AT_M1_2J = complex(-1.4152309345508257618, 5.5934492373178325145)

UNIT_DISK = FlowField(theta=0.0, beta=1, singularities=(Singularity(0j, 1.0),))


def test_identity_when_beta_zero():
    field = FlowField(theta=0.0, beta=0)
    pair = field.evaluate(1 + 2j)
    assert pair.phi == 1.0
    assert pair.psi == 2.0


def test_one_disk_on_axis():
    pair = UNIT_DISK.evaluate(2.0 + 0j)
    assert pair.phi == pytest.approx(2.5, abs=1e-15)
    assert pair.psi == pytest.approx(0.0, abs=1e-15)


def test_boundary_point_lies_on_zero_streamline():
    pair = UNIT_DISK.evaluate(1j)
    assert pair.phi == pytest.approx(0.0, abs=1e-15)
    assert pair.psi == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("z, expected", [
    (2 + 1j, ROTATED_AT_2_1J),
    (2 + 2j, ROTATED_AT_2_2J),
])
def test_rotated_field_matches_high_precision_reference(z, expected):
    field = FlowField(theta=math.pi / 4, beta=1,
                      singularities=(Singularity(1 + 0j, 0.4),))
    pair = field.evaluate(z)
    assert abs(pair.as_complex - expected) < 1e-14


def test_rotated_reference_values_still_hold():
    # Recompute the frozen constants with an independent high-precision
    # evaluation so a bad freeze cannot silently pass.
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 50

    def reference(z, theta, sings):
        rot = mp.e ** (-1j * theta)
        total = mp.mpc(0)
        for c, r in sings:
            d = (z - c) * rot
            total += d + mp.mpf(r) ** 2 / d
        return total

    v1 = reference(mp.mpc(2, 1), mp.pi / 4, [(mp.mpc(1, 0), "0.4")])
    v2 = reference(mp.mpc(2, 2), mp.pi / 4, [(mp.mpc(1, 0), "0.4")])
    v3 = reference(mp.mpc(-1, 2), mp.mpf("0.3"),
                   [(mp.mpc(1, 0), "0.4"), (mp.mpc(0, -1), "0.25")])
    assert abs(complex(v1) - ROTATED_AT_2_1J) < 1e-15
    assert abs(complex(v2) - ROTATED_AT_2_2J) < 1e-15
    assert abs(complex(v3) - MULTI_AT_M1_2J) < 1e-15

    field = FlowField(theta=0.3, beta=1,
                      singularities=(Singularity(1 + 0j, 0.4), Singularity(-1j, 0.25)))
    assert abs(field.evaluate(-1 + 2j).as_complex - MULTI_AT_M1_2J) < 1e-14


def test_singular_point_raises():
    with pytest.raises(SingularPoint):
        UNIT_DISK.evaluate(0j)
    with pytest.raises(SingularPoint):
        UNIT_DISK.evaluate(5e-10 + 0j)


def test_inside_disk_warns_but_evaluates():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        with pytest.raises(InsideCylinderWarning):
            UNIT_DISK.evaluate(0.5 + 0j)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        pair = UNIT_DISK.evaluate(0.5 + 0j)
    assert pair.phi == pytest.approx(2.5)


def test_overlapping_disks_warn_once():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        with pytest.raises(OverlappingDisksWarning):
            FlowField(theta=0.0, beta=1,
                      singularities=(Singularity(0j, 1.0), Singularity(0.5 + 0j, 1.0)))


def test_empty_singularities_force_identity():
    field = FlowField(theta=0.0, beta=1, singularities=())
    assert field.effective_beta == 0
    pair = field.evaluate(3 - 1j)
    assert (pair.phi, pair.psi) == (3.0, -1.0)


def test_invalid_construction():
    with pytest.raises(ValueError):
        Singularity(0j, 0.0)
    with pytest.raises(ValueError):
        Singularity(complex(math.inf, 0), 1.0)
    with pytest.raises(ValueError):
        FlowField(theta=0.0, beta=2)


# -- derivative ---------------------------------------------------------------

def test_derivative_identity():
    field = FlowField(beta=0)
    assert field.derivative(17 - 3j) == 1.0 + 0j


def test_derivative_on_axis():
    assert UNIT_DISK.derivative(2.0 + 0j) == pytest.approx(0.75 + 0j)


def test_derivative_boundary_point_real():
    d = UNIT_DISK.derivative(1j)
    assert d == pytest.approx(2.0 + 0j, abs=1e-15)


def test_derivative_matches_finite_differences():
    rng = np.random.RandomState(7)
    h = 1e-6
    for n_sing in (1, 2, 3):
        field = random_field(rng, n_sing)
        for z in sample_exterior(rng, field, 25):
            fd = (field.evaluate(z + h).as_complex - field.evaluate(z - h).as_complex) / (2 * h)
            analytic = field.derivative(z)
            assert abs(fd - analytic) <= 1e-6 * max(1.0, abs(analytic))


# -- analytic structure -------------------------------------------------------

def _num_grad(field, z, component, h=1e-6):
    fx = (getattr(field.evaluate(z + h), component)
          - getattr(field.evaluate(z - h), component)) / (2 * h)
    fy = (getattr(field.evaluate(z + h * 1j), component)
          - getattr(field.evaluate(z - h * 1j), component)) / (2 * h)
    return fx, fy


def test_cauchy_riemann_by_finite_differences():
    rng = np.random.RandomState(11)
    for n_sing in (1, 2, 4):
        field = random_field(rng, n_sing)
        for z in sample_exterior(rng, field, 20):
            px, py = _num_grad(field, z, "phi")
            sx, sy = _num_grad(field, z, "psi")
            scale = max(abs(field.derivative(z)), 1e-12)
            assert abs(px - sy) / scale < 1e-5
            assert abs(py + sx) / scale < 1e-5


def test_level_curves_orthogonal():
    rng = np.random.RandomState(13)
    field = random_field(rng, 2)
    for z in sample_exterior(rng, field, 30):
        px, py = _num_grad(field, z, "phi")
        sx, sy = _num_grad(field, z, "psi")
        dot = px * sx + py * sy
        norm = math.hypot(px, py) * math.hypot(sx, sy)
        if norm > 1e-10:
            assert abs(dot) / norm < 1e-8


def test_boundary_streamline_constant_psi():
    # Exact only for a single disk; multi-disk boundaries are approximate
    # and deliberately not asserted.
    field = FlowField(theta=0.0, beta=1, singularities=(Singularity(0.7 - 0.2j, 0.55),))
    values = []
    for k in range(32):
        z = field.singularities[0].center + 0.55 * cmath.exp(2j * math.pi * k / 32)
        values.append(field.evaluate(z).psi)
    assert max(values) - min(values) < 1e-12


# -- inversion ----------------------------------------------------------------

def test_invert_identity_field():
    field = FlowField(beta=0)
    assert field.invert(1 + 2j, 0j) == 1 + 2j


def test_invert_rejects_interior_mirror_root():
    # 2.0 and 0.5 both map to 2.5; the interior root must be rejected.
    assert UNIT_DISK.evaluate(2.0 + 0j).phi == pytest.approx(2.5)
    assert UNIT_DISK.evaluate(0.5 + 0j).phi == pytest.approx(2.5)
    z = UNIT_DISK.invert(2.5 + 0j, 1.9 + 0j)
    assert abs(z - 2.0) < 1e-9
    assert not UNIT_DISK.inside_any_disk(z)


def test_invert_from_interior_guess_diagnoses_interior_root():
    with pytest.raises((RootInsideCylinder, NoConvergence)):
        UNIT_DISK.invert(2.5 + 0j, 0.6 + 0j)


def test_invert_round_trip():
    rng = np.random.RandomState(17)
    for n_sing in (1, 2, 3, 4):
        field = random_field(rng, n_sing)
        for z in sample_exterior(rng, field, 25):
            target = field.evaluate(z).as_complex
            back = field.invert(target, z + 0.01)
            assert abs(back - z) < 1e-9
            assert not field.inside_any_disk(back)
            assert abs(field.evaluate(back).as_complex - target) <= 1e-10
