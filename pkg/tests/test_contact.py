import numpy as np
import pytest

from euler2c.contact import (
    PolarPoint, hill_boundary_radius, minimum_at_zero_check, potential,
    radial_derivative, transversality_audit)
from euler2c.core import critical_constants
from euler2c.errors import DomainError


def test_radial_derivative_vanishes_at_the_critical_point(quarter, tenth):
    for params in (quarter, tenth):
        point = PolarPoint(params.l_earth, 0.0)
        assert radial_derivative(params, point) == pytest.approx(
            0.0, abs=1e-12)


def test_radial_derivative_value(quarter):
    value = radial_derivative(quarter, PolarPoint(0.05, np.pi))
    expected = 300.0 + 0.25 * 1.05 / 1.1025 ** 1.5
    assert value == pytest.approx(expected, rel=1e-13)
    assert value == pytest.approx(300.23, abs=0.01)


@pytest.mark.parametrize('r', [0.1, 0.4, 0.7, 0.95])
def test_moon_side_is_smaller(quarter, r):
    difference = radial_derivative(quarter, PolarPoint(r, 0.0)) \
        - radial_derivative(quarter, PolarPoint(r, np.pi))
    expected = -0.25 / (1.0 - r) ** 2 - 0.25 / (1.0 + r) ** 2
    assert difference == pytest.approx(expected, rel=1e-12)
    assert difference < 0.0


def test_moon_position_is_refused(quarter):
    with pytest.raises(DomainError):
        radial_derivative(quarter, PolarPoint(1.0, 0.0))
    with pytest.raises(DomainError):
        potential(quarter, PolarPoint(1.0, 0.0))


def test_radius_must_be_positive():
    with pytest.raises(DomainError):
        PolarPoint(0.0, 1.0)


def test_potential(half):
    assert potential(half, PolarPoint(0.5, 0.0)) == pytest.approx(-2.0)


def test_two_critical_angles_for_small_radius(quarter):
    report = minimum_at_zero_check(quarter, 0.3)
    assert report.minimum_at_zero
    assert report.interior == []
    assert report.expected_interior is None
    assert [a.theta for a in report.critical] == [0.0, np.pi]
    assert report.ok


def test_third_critical_angle_for_large_radius(quarter):
    report = minimum_at_zero_check(quarter, 0.8)
    assert report.minimum_at_zero
    assert len(report.interior) == 1
    angle = report.interior[0]
    assert angle.kind == 'max'
    assert angle.theta == pytest.approx(np.arccos((2 * 0.64 - 1) / 0.8))
    assert report.ok


@pytest.mark.parametrize('mu', [0.1, 0.25, 0.5])
def test_minimum_in_the_direction_of_the_moon(mu):
    params = critical_constants(mu)
    for r in np.linspace(0.01, 0.99, 25):
        assert minimum_at_zero_check(params, float(r)).minimum_at_zero


def test_explicit_grid(quarter):
    report = minimum_at_zero_check(
        quarter, 0.5, np.linspace(0.0, np.pi, 101))
    assert report.argmin == 0.0


@pytest.mark.parametrize('r', [0.0, 1.0, 1.5])
def test_radius_range(quarter, r):
    with pytest.raises(DomainError):
        minimum_at_zero_check(quarter, r)


def test_audit_below_jacobi(quarter):
    report = transversality_audit(
        quarter, quarter.c_jacobi - 0.1, sample_count=2000)
    assert report.samples == 2000
    assert report.min_value > 0.0
    assert report.transverse
    assert report.contained
    assert report.max_radius < quarter.l_earth
    assert report.ok


def test_audit_equal_masses(half):
    report = transversality_audit(half, -3.0, sample_count=2000, seed=1)
    assert report.min_value > 0.0
    assert report.ok


def test_audit_is_reproducible(half):
    first = transversality_audit(half, -3.0, sample_count=500, seed=7)
    second = transversality_audit(half, -3.0, sample_count=500, seed=7)
    assert first == second


def test_audit_refuses_energies_above_jacobi(quarter):
    with pytest.raises(DomainError):
        transversality_audit(quarter, quarter.c_jacobi + 0.1)


def test_hill_boundary(half):
    r = hill_boundary_radius(half, -3.0, np.pi)
    assert potential(half, PolarPoint(r, np.pi)) == pytest.approx(-3.0)
    assert r < half.l_earth
