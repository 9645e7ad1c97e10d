import numpy as np
import pytest

from euler2c.core import (
    Component, EnergyMomentum, OrbitKind, Region, classify)
from euler2c.dynamics import (
    PhaseState, empirical_rotation, first_integral, first_integral_drift,
    hamiltonian, integrate, oscillation_count, oscillation_periods,
    regularized_energy, sample_state, separated_energies, to_cartesian,
    vector_field, wrap_angle)
from euler2c.errors import DomainError, InsufficientData
from euler2c.periods import critical_orbit_periods, period_closed_form
from euler2c.rotation import rotation_number

SAMPLED_POINTS = [
    (0.5, 2.0, -3.0, Component.EARTH),
    (0.5, 2.0, -3.0, Component.MOON),
    (0.25, 3.0, -3.0, Component.EARTH),
    (0.25, 1.5, -3.0, Component.MOON),
    (0.5, -0.5, -0.5, Component.WHOLE),
    (0.25, -1.0, -0.4, Component.WHOLE),
    (0.5, -1.75, -0.5, Component.WHOLE),
]


def test_regularized_energy_on_the_interior_orbit(half):
    state = PhaseState(0.0, 0.0, 0.0, 1.0)
    assert regularized_energy(half, -3.0, state) == pytest.approx(
        0.0, abs=1e-15)
    k_lam, k_nu = separated_energies(half, -3.0, state)
    assert k_lam == pytest.approx(1.0)
    assert k_nu == pytest.approx(-1.0)


def test_vector_field_keeps_the_collision_line(half):
    rate = vector_field(half, -3.0, PhaseState(0.0, 0.3, 0.0, 0.7))
    assert rate.lam == 0.0
    assert rate.p_lam == 0.0
    assert rate.nu == pytest.approx(2.8)


def test_vector_field_is_hamiltonian(quarter):
    state = PhaseState(0.4, 1.1, -0.2, 0.5)
    c = -2.5
    h = 1e-6
    rate = vector_field(quarter, c, state)

    def k(lam=state.lam, nu=state.nu, p_lam=state.p_lam, p_nu=state.p_nu):
        return regularized_energy(
            quarter, c, PhaseState(lam, nu, p_lam, p_nu))

    assert rate.lam == pytest.approx(
        (k(p_lam=state.p_lam + h) - k(p_lam=state.p_lam - h)) / (2 * h),
        rel=1e-7)
    assert rate.p_nu == pytest.approx(
        -(k(nu=state.nu + h) - k(nu=state.nu - h)) / (2 * h), rel=1e-7)


@pytest.mark.parametrize('mu, g, c, component', SAMPLED_POINTS)
def test_sampled_state_is_on_the_torus(mu, g, c, component):
    em = EnergyMomentum.at(mu, g, c)
    state = sample_state(em, component)
    assert regularized_energy(em.params, c, state) == pytest.approx(
        0.0, abs=1e-12)
    assert first_integral(em.params, c, state) == pytest.approx(g, rel=1e-9)
    assert separated_energies(em.params, c, state)[0] == pytest.approx(g)


def test_moon_component_sample_lies_near_the_moon():
    state = sample_state(EnergyMomentum.at(0.5, 2.0, -3.0), Component.MOON)
    assert to_cartesian(state).q1 > 0.0
    state = sample_state(EnergyMomentum.at(0.5, 2.0, -3.0), Component.EARTH)
    assert to_cartesian(state).q1 < 0.0


def test_first_integral_undefined_at_collision(half):
    assert np.isnan(first_integral(half, -3.0, PhaseState(0.0, 0.0, 0.0, 1.0)))


@pytest.mark.parametrize('state', [
    PhaseState(0.3, 1.0, 0.2, -0.4),
    PhaseState(1.1, -2.5, -0.7, 0.1),
    PhaseState(0.05, 0.4, 0.0, 0.9),
])
def test_first_integral_is_k_lambda_on_the_shell(quarter, state):
    c = -2.0
    k_lam, _ = separated_energies(quarter, c, state)
    k = regularized_energy(quarter, c, state)
    ch2 = np.cosh(state.lam) ** 2
    denom = ch2 - np.cos(state.nu) ** 2
    # G - K_lambda = -K cosh^2(lambda) / (cosh^2(lambda) - cos^2(nu))
    assert first_integral(quarter, c, state) - k_lam == pytest.approx(
        -k * ch2 / denom, rel=1e-9, abs=1e-12)


def test_zero_length_integration(half):
    traj = integrate(half, -3.0, PhaseState(0.0, 0.0, 0.0, 1.0), 0.0)
    assert len(traj.taus) == 1
    assert traj.energy_drift == 0.0
    assert len(traj.samples) == 1


def test_off_shell_state_is_refused(half):
    with pytest.raises(DomainError):
        integrate(half, -3.0, PhaseState(0.0, 0.0, 0.0, 2.0), 1.0)


def test_negative_time_is_refused(half):
    with pytest.raises(DomainError):
        integrate(half, -3.0, PhaseState(0.0, 0.0, 0.0, 1.0), -1.0)


def test_interior_collision_orbit(half):
    periods = critical_orbit_periods(half, -3.0, OrbitKind.INTERIOR)
    traj = integrate(
        half, -3.0, PhaseState(0.0, 0.0, 0.0, 1.0),
        10.0 * 2.0 * periods.tau_eta)
    assert traj.xi_frozen
    assert np.max(np.abs(traj.states[:, 0])) < 1e-10
    assert traj.energy_drift < 1e-9

    # the orbit runs along the segment between the primaries
    for _, state in traj.samples:
        q = to_cartesian(state)
        assert -0.5 - 1e-12 <= q.q1 <= 0.5 + 1e-12
        assert q.q2 == pytest.approx(0.0, abs=1e-12)

    estimate = empirical_rotation(traj)
    assert not estimate.is_torus
    assert estimate.value == np.inf


def _long_trajectory(em, component=Component.EARTH, periods=12.0):
    closed = period_closed_form(em, component)
    state = sample_state(em, component)
    tau_end = periods * max(closed.tau_xi, closed.tau_eta)
    return closed, integrate(em.params, em.c, state, tau_end)


def test_regular_s_orbit():
    em = EnergyMomentum.at(0.5, 2.0, -3.0)
    closed, traj = _long_trajectory(em)
    assert traj.energy_drift <= 1e-9
    assert first_integral_drift(traj) <= 1e-9

    measured = oscillation_periods(traj)
    assert measured.xi_oscillations >= 10
    assert measured.xi == pytest.approx(closed.tau_xi, rel=1e-6)
    assert measured.eta == pytest.approx(closed.tau_eta, rel=1e-6)

    estimate = empirical_rotation(traj)
    assert estimate.is_torus
    assert estimate.value == pytest.approx(
        rotation_number(em).value, abs=1e-3)
    assert estimate.uncertainty <= 0.1


@pytest.mark.parametrize('mu, g, c', [
    (0.25, 3.0, -3.0), (0.25, -1.0, -0.4), (0.5, -1.75, -0.5)])
def test_empirical_rotation_in_other_regions(mu, g, c):
    em = EnergyMomentum.at(mu, g, c)
    _, traj = _long_trajectory(em)
    estimate = empirical_rotation(traj)
    expected = rotation_number(em).value
    assert estimate.value == pytest.approx(expected, abs=1e-3)
    if classify(em).region == Region.P:
        assert 0.0 < estimate.value < 1.0


def test_oscillation_count_with_end_correction():
    # turns every 0.5, so one oscillation per unit of time
    turns = (0.25, 0.75, 1.25, 1.75)
    assert oscillation_count(turns, 2.0) == pytest.approx(2.0)
    assert oscillation_count(turns, 1.9) == pytest.approx(1.9)
    assert oscillation_count((0.3,), 1.0) == 0.5
    assert oscillation_count((), 1.0) == 0.0


def test_empirical_rotation_is_a_ratio_of_counts():
    em = EnergyMomentum.at(0.5, 2.0, -3.0)
    closed, traj = _long_trajectory(em)
    tau_end = float(traj.taus[-1])
    n_xi = oscillation_count(traj.xi_turns, tau_end)
    n_eta = oscillation_count(traj.eta_turns, tau_end)
    assert n_xi == pytest.approx(tau_end / closed.tau_xi, rel=1e-6)
    assert n_eta == pytest.approx(tau_end / closed.tau_eta, rel=1e-6)
    assert empirical_rotation(traj).value == pytest.approx(
        n_xi / n_eta, rel=1e-12)


def test_short_trajectory_is_insufficient():
    em = EnergyMomentum.at(0.5, 2.0, -3.0)
    _, traj = _long_trajectory(em, periods=2.0)
    with pytest.raises(InsufficientData):
        empirical_rotation(traj)


def test_nu_is_wrapped():
    em = EnergyMomentum.at(0.5, -1.75, -0.5)
    _, traj = _long_trajectory(em, periods=3.0)
    assert np.all(np.abs(traj.states[:, 1]) <= np.pi)
    assert wrap_angle(2.5 * np.pi) == pytest.approx(0.5 * np.pi)
    assert wrap_angle(-0.5) == pytest.approx(-0.5)


def test_primaries():
    moon = to_cartesian(PhaseState(0.0, 0.0, 0.0, 0.0))
    assert (moon.q1, moon.q2) == (0.5, 0.0)
    assert moon.p1 is None and moon.p2 is None

    earth = to_cartesian(PhaseState(0.0, np.pi, 0.0, 0.0))
    assert earth.q1 == pytest.approx(-0.5)
    assert earth.q2 == pytest.approx(0.0, abs=1e-16)


@pytest.mark.parametrize('mu, g, c, component', SAMPLED_POINTS)
def test_cartesian_energy(mu, g, c, component):
    em = EnergyMomentum.at(mu, g, c)
    q = to_cartesian(sample_state(em, component))
    assert hamiltonian(em.params, (q.q1, q.q2), (q.p1, q.p2)) \
        == pytest.approx(c, abs=1e-9)


def test_collision_segment():
    for nu in np.linspace(-np.pi, np.pi, 9):
        q = to_cartesian(PhaseState(0.0, nu, 0.0, 0.0))
        assert q.q1 == pytest.approx(0.5 * np.cos(nu))
        assert q.q2 == 0.0
