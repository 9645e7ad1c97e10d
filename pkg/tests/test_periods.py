import mpmath
import numpy as np
import pytest

from euler2c.core import (
    Component, EnergyMomentum, OrbitKind, Region, RegionTag,
    admissible_g_interval, classify, critical_constants)
from euler2c.errors import DomainError
from euler2c.periods import (
    Axis, critical_orbit_kind, critical_orbit_periods, moduli,
    period_closed_form, period_oracle, quadrature_period, scaled_k)
from euler2c.rotation import verify_period_monotonicity

REGULAR_POINTS = [
    (0.5, 2.0, -3.0),
    (0.5, 3.0, -4.0),
    (0.25, 3.0, -3.0),
    (0.25, 1.5, -3.0),
    (0.5, -0.5, -0.5),
    (0.25, -1.0, -0.4),
    (0.25, -0.61, -0.4),
    (0.5, -1.75, -0.5),
    (0.1, -1.364, -0.7),
]


def _interior_tau_eta():
    m = 7 - 4 * mpmath.sqrt(3)
    return float(mpmath.ellipk(m) / mpmath.sqrt(2 + mpmath.sqrt(3)))


def test_moduli_in_s():
    m = moduli(EnergyMomentum.at(0.5, 2.0, -3.0))
    assert m.k1_sq == pytest.approx(0.5 * (1 - 5 / (2 * np.sqrt(7))))
    assert m.applicable == frozenset({'k1_sq', 'r2_sq'})
    assert 0.0 < m.r2_sq < 1.0


def test_moduli_on_interior_curve():
    m = moduli(EnergyMomentum.at(0.5, 1.0, -3.0))
    assert m.k1_sq == 0.0
    assert m.r2_sq == pytest.approx(7 - 4 * np.sqrt(3))


def test_moduli_branch_in_l():
    below = moduli(EnergyMomentum.at(0.25, -0.61, -0.4))
    above = moduli(EnergyMomentum.at(0.25, -1.0, -0.4))
    assert 'r3_sq' in below.applicable
    assert 'r4_sq' in above.applicable
    assert np.isnan(above.r3_sq)


@pytest.mark.parametrize('mu, g, c', REGULAR_POINTS)
def test_applicable_moduli_are_inside_the_unit_interval(mu, g, c):
    m = moduli(EnergyMomentum.at(mu, g, c))
    assert len(m.applicable) == 2
    for name in m.applicable:
        assert 0.0 <= getattr(m, name) < 1.0


def test_interior_orbit_periods(half):
    periods = critical_orbit_periods(half, -3.0, OrbitKind.INTERIOR)
    assert periods.tau_xi == pytest.approx(np.pi / 4, rel=1e-15)
    assert periods.tau_eta == pytest.approx(_interior_tau_eta(), rel=1e-14)


def test_curve_point_gives_the_critical_orbit():
    em = EnergyMomentum.at(0.5, 1.0, -3.0)
    assert critical_orbit_kind(classify(em)) == OrbitKind.INTERIOR
    periods = period_closed_form(em)
    assert periods.tau_xi == pytest.approx(np.pi / 4)
    assert periods.tau_eta == pytest.approx(_interior_tau_eta())


@pytest.mark.parametrize('tag, kind', [
    (RegionTag(Region.ON_L1), OrbitKind.EXTERIOR_EARTH),
    (RegionTag(Region.ON_L2), OrbitKind.EXTERIOR_MOON),
    (RegionTag(Region.ON_L4), OrbitKind.HYPERBOLIC),
    (RegionTag(Region.ON_L5), OrbitKind.ELLIPTIC),
])
def test_critical_orbit_kind(tag, kind):
    assert critical_orbit_kind(tag) == kind


def test_hyperbolic_orbit_has_infinite_eta_period(quarter):
    periods = critical_orbit_periods(quarter, -1.0, OrbitKind.HYPERBOLIC)
    assert periods.tau_eta == np.inf
    assert np.isfinite(periods.tau_xi)


def test_exterior_moon_above_c_h(quarter):
    periods = critical_orbit_periods(
        quarter, -0.3, OrbitKind.EXTERIOR_MOON)
    assert periods.tau_eta == np.inf


def test_double_collision_above_c_e(quarter):
    periods = critical_orbit_periods(quarter, -0.5, OrbitKind.DOUBLE)
    assert periods.tau_xi == np.inf
    assert np.isfinite(periods.tau_eta)


def test_window_is_enforced(half):
    with pytest.raises(DomainError):
        critical_orbit_periods(half, -1.5, OrbitKind.INTERIOR)


@pytest.mark.parametrize('mu, g, c', REGULAR_POINTS)
def test_closed_form_against_quadrature(mu, g, c):
    em = EnergyMomentum.at(mu, g, c)
    closed = period_closed_form(em)
    assert period_oracle(em, Axis.XI, Component.EARTH) == pytest.approx(
        closed.tau_xi, rel=1e-8)
    assert period_oracle(em, Axis.ETA, Component.EARTH) == pytest.approx(
        closed.tau_eta, rel=1e-8)


def test_both_s_components_share_the_eta_period():
    em = EnergyMomentum.at(0.25, 1.5, -3.0)
    closed = period_closed_form(em, Component.MOON)
    for component in (Component.EARTH, Component.MOON):
        assert period_oracle(em, Axis.ETA, component) == pytest.approx(
            closed.tau_eta, rel=1e-8)


def test_periods_approach_the_interior_orbit(half):
    limit = critical_orbit_periods(half, -3.0, OrbitKind.INTERIOR)
    near = period_closed_form(EnergyMomentum(half, 1.0 + 1e-7, -3.0))
    assert near.tau_xi == pytest.approx(limit.tau_xi, rel=1e-5)
    assert near.tau_eta == pytest.approx(limit.tau_eta, rel=1e-5)


def test_forbidden_point(half):
    with pytest.raises(DomainError):
        period_closed_form(EnergyMomentum(half, -10.0, -3.0))


def test_sprime_moon_component(quarter):
    with pytest.raises(DomainError):
        period_closed_form(
            EnergyMomentum(quarter, 3.0, -3.0), Component.MOON)


def test_scaled_k():
    assert scaled_k(1.0) == np.inf
    assert scaled_k(1.0 - 1e-14) == np.inf
    assert scaled_k(-1e-15) == pytest.approx(np.pi / 2)
    assert scaled_k(0.0, 2.0) == pytest.approx(np.pi)
    with pytest.raises(DomainError):
        scaled_k(-0.5)
    with pytest.raises(DomainError):
        scaled_k(np.nan)


def test_quadrature_of_a_harmonic_oscillation():
    # F(s) = 2 (s - 1)(s + 1)(s - 2)(s + 2) on [-1, 1]
    value = quadrature_period(2.0, [1.0, -1.0, 2.0, -2.0], (-1.0, 1.0))
    expected = mpmath.quad(
        lambda s: 1 / mpmath.sqrt(2 * (1 - s * s) * (4 - s * s)), [-1, 1])
    assert value == pytest.approx(float(expected) / np.sqrt(2), rel=1e-10)


def test_quadrature_needs_an_interval():
    with pytest.raises(DomainError):
        quadrature_period(-1.0, [0.0, 0.0, 1.0, -1.0], (0.0, 0.0))


def _period_case(mu, region):
    params = critical_constants(mu)
    c_j = params.c_jacobi
    c = {
        Region.SPRIME: c_j - 0.5,
        Region.S: c_j - 0.5,
        Region.L: c_j + 0.3 * abs(c_j),
        Region.P: -0.5,
    }[region]
    return params, c


@pytest.mark.parametrize('mu', [0.1, 0.25, 0.5])
@pytest.mark.parametrize('region, directions', [
    (Region.SPRIME, (-1, -1)),
    (Region.S, (-1, -1)),
    (Region.L, (-1, 1)),
    (Region.P, (1, 1)),
])
def test_periods_are_monotone_in_g(mu, region, directions):
    params, c = _period_case(mu, region)
    interval = admissible_g_interval(params, c, region)
    if interval is None:
        assert (mu, region) == (0.5, Region.SPRIME)
        return

    lo, hi = interval
    pad = 1e-3 * (hi - lo)
    grid = np.linspace(lo + pad, hi - pad, 40)
    xi, eta = verify_period_monotonicity(params, region, c, grid)
    assert (xi.expected, eta.expected) == directions
    assert xi.ok, xi.violations
    assert eta.ok, eta.violations
    assert xi.fixed_sign == directions[0]
    assert eta.fixed_sign == directions[1]


def test_period_monotonicity_needs_a_regular_region():
    params = critical_constants(0.5)
    with pytest.raises(DomainError):
        verify_period_monotonicity(params, Region.ON_L1, -3.0, [1.0, 1.5])
