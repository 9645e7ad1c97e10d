from fractions import Fraction

import mpmath
import numpy as np
import pytest

from euler2c.core import (
    EnergyMomentum, OrbitKind, Region, admissible_g_interval,
    critical_constants)
from euler2c.errors import DomainError
from euler2c.periods import period_closed_form
from euler2c.rotation import (
    c_zero_threshold, critical_energy_for_rotation, critical_rotation,
    exterior_bound_check, finite_difference_signs, rotation_number,
    trace_torus_family, verify_monotonicity)
from euler2c.special_functions import complete_k

from test_periods import REGULAR_POINTS


@pytest.mark.parametrize('mu, g, c', REGULAR_POINTS)
def test_rotation_is_the_period_ratio(mu, g, c):
    em = EnergyMomentum.at(mu, g, c)
    periods = period_closed_form(em)
    rotation = rotation_number(em)
    assert not rotation.exact
    assert rotation.value == pytest.approx(
        periods.tau_eta / periods.tau_xi, rel=1e-12)


@pytest.mark.parametrize('mu, g, c', [
    (0.5, 2.0, -3.0), (0.25, 3.0, -3.0), (0.25, 1.5, -3.0)])
def test_rotation_exceeds_one_in_s_and_sprime(mu, g, c):
    assert rotation_number(EnergyMomentum.at(mu, g, c)).value > 1.0


@pytest.mark.parametrize('mu, g, c', [
    (0.5, -1.75, -0.5), (0.1, -1.364, -0.7)])
def test_rotation_below_one_in_p(mu, g, c):
    assert 0.0 < rotation_number(EnergyMomentum.at(mu, g, c)).value < 1.0


def test_rotation_refuses_curve_points():
    with pytest.raises(DomainError):
        rotation_number(EnergyMomentum.at(0.5, 1.0, -3.0))


def test_interior_rotation(half):
    m = 7 - 4 * mpmath.sqrt(3)
    tau_eta = mpmath.ellipk(m) / mpmath.sqrt(2 + mpmath.sqrt(3))
    expected = float(tau_eta / (mpmath.pi / 4))
    rotation = critical_rotation(half, -3.0, OrbitKind.INTERIOR)
    assert rotation.value == pytest.approx(expected, rel=1e-13)
    assert rotation.value == pytest.approx(1.054, abs=1e-3)


def test_interior_rotation_is_the_limit_of_s(half):
    near = rotation_number(EnergyMomentum(half, 1.0 + 1e-8, -3.0))
    limit = critical_rotation(half, -3.0, OrbitKind.INTERIOR)
    assert near.value == pytest.approx(limit.value, rel=1e-6)


def test_exterior_rotation_is_the_limit_of_s(quarter):
    g = 2.0 - 1e-8
    near = rotation_number(EnergyMomentum(quarter, g, -3.0))
    limit = critical_rotation(quarter, -3.0, OrbitKind.EXTERIOR_MOON)
    assert near.value == pytest.approx(limit.value, rel=1e-3)


def test_sentinels(quarter):
    hyperbolic = critical_rotation(quarter, -1.0, OrbitKind.HYPERBOLIC)
    assert hyperbolic.is_infinite and hyperbolic.exact

    double = critical_rotation(quarter, -0.5, OrbitKind.DOUBLE)
    assert double.is_zero and double.value == 0.0

    moon = critical_rotation(quarter, -0.3, OrbitKind.EXTERIOR_MOON)
    assert moon.is_infinite and moon.exact


@pytest.mark.parametrize('mu', [0.1, 0.25, 0.5])
def test_critical_limits(mu):
    p = critical_constants(mu)
    assert critical_rotation(p, -1e6, OrbitKind.INTERIOR).value \
        == pytest.approx(1.0, abs=1e-3)
    assert critical_rotation(p, -1e-6, OrbitKind.ELLIPTIC).value \
        == pytest.approx(1.0, abs=1e-3)
    assert critical_rotation(p, p.c_e - 1e-6, OrbitKind.DOUBLE).value \
        < 1e-2


def test_window(half):
    with pytest.raises(DomainError):
        critical_rotation(half, -1.0, OrbitKind.INTERIOR)


@pytest.mark.parametrize('kind', [
    OrbitKind.INTERIOR, OrbitKind.EXTERIOR_EARTH, OrbitKind.EXTERIOR_MOON])
def test_collision_monotonicity(quarter, kind):
    hi = quarter.c_jacobi - 1e-6
    report = verify_monotonicity(quarter, kind, np.linspace(-50.0, hi, 200))
    assert report.expected == 1
    assert report.ok


def test_double_collision_decreases(quarter):
    grid = np.linspace(quarter.c_jacobi + 1e-6, quarter.c_e - 1e-6, 200)
    report = verify_monotonicity(quarter, OrbitKind.DOUBLE, grid)
    assert report.expected == -1
    assert report.ok


def test_sprime_rotation_decreases_in_g(quarter):
    grid = np.linspace(2.01, 3.99, 100)
    report = verify_monotonicity(
        quarter, Region.SPRIME, grid, c=-3.0, expected=-1)
    assert report.ok
    assert set(report.signs) == {-1}


def test_region_survey_requires_energy(quarter):
    with pytest.raises(DomainError):
        verify_monotonicity(quarter, Region.S, [1.2, 1.5])


def test_finite_difference_violations():
    report = finite_difference_signs(
        np.sin, np.linspace(0.0, np.pi, 11), expected=1, target='sin')
    assert not report.ok
    assert report.signs[0] == 1 and report.signs[-1] == -1
    assert report.fixed_sign is None

    rising = finite_difference_signs(np.exp, np.linspace(0.0, 1.0, 11))
    assert rising.ok
    assert rising.fixed_sign == 1


@pytest.mark.parametrize('mu', [0.1, 0.25, 0.5])
def test_exterior_bound(mu):
    p = critical_constants(mu)
    bound = exterior_bound_check(
        p, np.linspace(-100.0, p.c_jacobi - 1e-6, 200))
    assert 1.0 < bound.maximum < 2.0
    assert bound.dominance


def test_exterior_bound_grid_below_jacobi(half):
    with pytest.raises(DomainError):
        exterior_bound_check(half, [-3.0, -1.0])


def test_c_zero_threshold(half, quarter):
    assert c_zero_threshold(half) is None

    c0 = c_zero_threshold(quarter)
    assert c0 < quarter.c_jacobi
    target = np.pi / (2.0 * np.sqrt(quarter.beta) * complete_k(0.25))
    assert critical_rotation(quarter, c0, OrbitKind.INTERIOR).value \
        == pytest.approx(target, rel=1e-9)


def test_inverse_of_interior_rotation(half):
    c = critical_energy_for_rotation(half, OrbitKind.INTERIOR, 1.5)
    assert c < half.c_jacobi
    assert critical_rotation(half, c, OrbitKind.INTERIOR).value \
        == pytest.approx(1.5, abs=1e-9)


def test_inverse_of_unattained_value(half):
    with pytest.raises(DomainError):
        critical_energy_for_rotation(half, OrbitKind.INTERIOR, 0.5)
    with pytest.raises(DomainError):
        critical_energy_for_rotation(half, OrbitKind.HYPERBOLIC, 1.0)


def test_family_one_one_in_s_is_empty(half):
    curve = trace_torus_family(half, 1, 1, -4.0, -3.0, 0.5)
    assert curve.samples == ()
    assert curve.omitted == (-4.0, -3.5, -3.0)
    assert curve.terminals == {}


def test_family_three_two_ends_on_the_interior_orbit(half):
    c_end = critical_energy_for_rotation(half, OrbitKind.INTERIOR, 1.5)
    # the family exists between c_end and c_J = -2 only
    curve = trace_torus_family(half, 3, 2, -2.251, -2.001, 0.05)
    assert curve.ratio == (3, 2)
    assert curve.endpoints[OrbitKind.INTERIOR] == pytest.approx(c_end)
    assert len(curve.samples) > 0
    for sample in curve.samples:
        assert sample.c >= c_end - 1e-9
        em = EnergyMomentum(half, sample.g, sample.c)
        assert rotation_number(em).value == pytest.approx(1.5, abs=1e-10)


@pytest.mark.parametrize('k, l', [(2, 4), (0, 1), (3, -2)])
def test_family_ratio_must_be_reduced(half, k, l):
    with pytest.raises(DomainError):
        trace_torus_family(half, k, l, -4.0, -3.0, 0.5)


@pytest.mark.parametrize('mu, c', [(0.1, -2.5), (0.25, -3.0), (0.5, -3.0)])
def test_s_rotation_keeps_one_direction(mu, c):
    params = critical_constants(mu)
    lo, hi = admissible_g_interval(params, c, Region.S)
    pad = 1e-3 * (hi - lo)
    report = verify_monotonicity(
        params, Region.S, np.linspace(lo + pad, hi - pad, 60), c=c)
    assert report.fixed_sign is not None


def test_family_one_two_starts_on_the_elliptic_orbit(quarter):
    c_ell = critical_energy_for_rotation(quarter, OrbitKind.ELLIPTIC, 0.5)
    curve = trace_torus_family(quarter, 1, 2, c_ell - 0.018, -0.05, 0.02)
    assert curve.endpoints[OrbitKind.ELLIPTIC] == pytest.approx(c_ell)

    branch = [s for s in curve.samples if s.region == Region.P]
    assert len(branch) > 0
    assert min(s.c for s in branch) > c_ell
    assert curve.terminals[Region.P][0] == 'l5'

    for sample in branch:
        value = rotation_number(
            EnergyMomentum(quarter, sample.g, sample.c)).value
        assert 0.0 < value < 1.0
        lo, hi = admissible_g_interval(quarter, sample.c, Region.P)
        middle = rotation_number(
            EnergyMomentum(quarter, 0.5 * (lo + hi), sample.c)).value
        assert 0.0 < middle < 1.0


def test_sprime_family_rises_in_energy(quarter):
    value = rotation_number(EnergyMomentum(quarter, 3.0, -3.0)).value
    ratio = Fraction(value).limit_denominator(50)
    curve = trace_torus_family(
        quarter, ratio.numerator, ratio.denominator, -3.2, -2.8, 0.1)
    branch = [s for s in curve.samples if s.region == Region.SPRIME]
    assert len(branch) >= 2
    for a, b in zip(branch[:-1], branch[1:]):
        assert b.c > a.c
        assert (b.c - a.c) / (b.g - a.g) > 0.0
