"""
The regularized flow in the doubly covered elliptic coordinates

    q1 = cosh(lam) cos(nu) / 2,  q2 = sinh(lam) sin(nu) / 2

with the Hamiltonian K = (H - c)(cosh^2 lam - cos^2 nu) on K = 0.
"""
from dataclasses import dataclass, field
from logging import getLogger
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from euler2c import config
from euler2c.core import (
    Component, EnergyMomentum, ProblemParams, oscillation_ranges)
from euler2c.errors import DomainError, InsufficientData, IntegrationError

logger = getLogger(__name__)

EARTH = np.array([-0.5, 0.0])
MOON = np.array([0.5, 0.0])


@dataclass(frozen=True)
class PhaseState(object):
    """
    A point (lambda, nu, p_lambda, p_nu) of the regularized phase space.
    """
    lam: float
    nu: float
    p_lam: float
    p_nu: float

    def as_array(self) -> np.ndarray:
        return np.array([self.lam, self.nu, self.p_lam, self.p_nu])

    @classmethod
    def from_array(cls, y) -> 'PhaseState':
        return cls(float(y[0]), float(y[1]), float(y[2]), float(y[3]))


@dataclass(frozen=True)
class CartesianState(object):
    q1: float
    q2: float
    p1: Optional[float] = None
    p2: Optional[float] = None


def wrap_angle(nu: float) -> float:
    """
    Wrap an angle into [-pi, pi].
    """
    return float((nu + np.pi) % (2.0 * np.pi) - np.pi)


def separated_energies(params: ProblemParams, c: float,
                       state: PhaseState) -> Tuple[float, float]:
    """
    The separated parts
    K_lambda = 2 p_lambda^2 - 2 cosh(lambda) - c cosh^2(lambda) and
    K_nu = 2 p_nu^2 + 2 (1 - 2mu) cos(nu) + c cos^2(nu).

    Each is conserved by the flow; on the shell K = 0 the first
    integral G equals K_lambda = -K_nu.
    """
    ch = np.cosh(state.lam)
    cn = np.cos(state.nu)
    k_lam = 2.0 * state.p_lam ** 2 - 2.0 * ch - c * ch * ch
    k_nu = 2.0 * state.p_nu ** 2 + 2.0 * params.beta * cn + c * cn * cn
    return float(k_lam), float(k_nu)


def regularized_energy(params: ProblemParams, c: float,
                       state: PhaseState) -> float:
    """
    K = K_lambda + K_nu = (H - c)(cosh^2 lambda - cos^2 nu).
    """
    k_lam, k_nu = separated_energies(params, c, state)
    return k_lam + k_nu


def _field(params: ProblemParams, c: float, y: np.ndarray) -> np.ndarray:
    lam, nu, p_lam, p_nu = y
    return np.array([
        4.0 * p_lam,
        4.0 * p_nu,
        2.0 * np.sinh(lam) * (1.0 + c * np.cosh(lam)),
        2.0 * np.sin(nu) * (params.beta + c * np.cos(nu)),
    ])


def vector_field(params: ProblemParams, c: float,
                 state: PhaseState) -> PhaseState:
    """
    The Hamiltonian vector field X_K, returned as the time derivative
    of the state.
    """
    return PhaseState.from_array(_field(params, c, state.as_array()))


def first_integral(params: ProblemParams, c: float,
                   state: PhaseState) -> float:
    """
    The first integral G in the doubly covered coordinates,

        G = -(H_lam cos^2 nu + H_nu cosh^2 lam) / (cosh^2 lam - cos^2 nu)

    with H_lam = 2 p_lam^2 - 2 cosh lam and
    H_nu = 2 p_nu^2 + 2 (1 - 2mu) cos nu.

    Undefined (NaN) at the collisions with the primaries.
    """
    ch2 = np.cosh(state.lam) ** 2
    cn = np.cos(state.nu)
    denom = ch2 - cn * cn
    if abs(denom) < 1e-12:
        return np.nan

    h_lam = 2.0 * state.p_lam ** 2 - 2.0 * np.cosh(state.lam)
    h_nu = 2.0 * state.p_nu ** 2 + 2.0 * params.beta * cn
    return float(-(h_lam * cn * cn + h_nu * ch2) / denom)


def sample_state(em: EnergyMomentum,
                 component: Component = Component.EARTH) -> PhaseState:
    """
    A state on the Liouville torus (g, c).

    xi and eta are set to the midpoints of their oscillation ranges and
    the momenta to the positive branches p_xi, p_eta > 0, so that
    p_lambda = p_xi sinh(lambda) and p_nu = -p_eta sin(nu).
    The state satisfies K = 0 and G = g.

    Parameters
    ----------
    em: EnergyMomentum
        A regular point.
    component: Component
        Earth or Moon in the S-region.
    """
    (x0, x1), (e0, e1) = oscillation_ranges(em, component)
    xi = 0.5 * (x0 + x1)
    eta = 0.5 * (e0 + e1)
    g, c = em.g, em.c
    quad_xi = c * xi * xi + 2.0 * xi + g
    quad_eta = c * eta * eta + 2.0 * em.params.beta * eta + g
    lam = float(np.arccosh(xi))
    nu = float(np.arccos(eta))
    # K_lambda = g and K_nu = -g
    p_lam = np.sqrt(max(quad_xi, 0.0) / 2.0)
    p_nu = -np.sqrt(max(-quad_eta, 0.0) / 2.0)
    return PhaseState(lam, nu, float(p_lam), float(p_nu))


@dataclass(frozen=True)
class Trajectory(object):
    """
    Accepted steps of an integration of X_K.

    Attributes
    ----------
    params: ProblemParams
        The problem parameters.
    c: float
        The energy.
    taus: numpy.ndarray
        Strictly increasing times.
    states: numpy.ndarray
        Shape (n, 4); nu is wrapped into [-pi, pi].
    energy_drift: float
        max |K(state) - K(state0)| over the samples.
    xi_turns, eta_turns: tuple of float
        Times of the turning points of xi = cosh(lambda) and
        eta = cos(nu).
    xi_frozen, eta_frozen: bool
        True if the coordinate stays at a fixed point of its
        one-degree-of-freedom motion (collision orbits).
    """
    params: ProblemParams
    c: float
    taus: np.ndarray
    states: np.ndarray
    energy_drift: float
    xi_turns: Tuple[float, ...] = field(default=())
    eta_turns: Tuple[float, ...] = field(default=())
    xi_frozen: bool = False
    eta_frozen: bool = False

    @property
    def samples(self) -> List[Tuple[float, PhaseState]]:
        return [(float(t), PhaseState.from_array(y))
                for t, y in zip(self.taus, self.states)]


def _xi_turn(t, y):
    return np.sinh(y[0]) * y[2]


def _eta_turn(t, y):
    return np.sin(y[1]) * y[3]


def integrate(params: ProblemParams, c: float, state0: PhaseState,
              tau_end: float,
              tolerance: Optional[float] = None) -> Trajectory:
    """
    Integrate the regularized flow from state0 over [0, tau_end].

    The explicit Runge-Kutta scheme DOP853 with adaptive steps is used;
    the turning points of xi and eta are located as events.
    The run is rejected, not projected, if K drifts by more than
    config.drift_limit.

    Parameters
    ----------
    params: ProblemParams
        The problem parameters.
    c: float
        The energy.
    state0: PhaseState
        The initial state, on the shell K = 0.
    tau_end: float
        The final time, >= 0.
    tolerance: float, optional
        The relative and absolute local error target.
        The default is config.ivp_rtol.
    """
    k0 = regularized_energy(params, c, state0)
    if abs(k0) > config.shell_tol:
        raise DomainError(
            "The initial state is off the shell K=0: K={:.3g}".format(k0))
    if tau_end < 0.0:
        raise DomainError("tau_end must be non-negative.")

    y0 = state0.as_array()
    xi_frozen = state0.lam == 0.0 and state0.p_lam == 0.0
    eta_frozen = np.sin(state0.nu) == 0.0 and state0.p_nu == 0.0

    if tau_end == 0.0:
        states = y0.reshape(1, 4).copy()
        states[0, 1] = wrap_angle(states[0, 1])
        return Trajectory(
            params=params, c=c, taus=np.zeros(1), states=states,
            energy_drift=0.0, xi_frozen=xi_frozen, eta_frozen=eta_frozen)

    events = []
    if not xi_frozen:
        events.append(_xi_turn)
    if not eta_frozen:
        events.append(_eta_turn)

    rtol = tolerance or config.ivp_rtol
    atol = tolerance or config.ivp_atol
    logger.debug("integrate c={} from {} to tau={}".format(
        c, state0, tau_end))
    sol = solve_ivp(
        lambda t, y: _field(params, c, y), (0.0, tau_end), y0,
        method='DOP853', rtol=rtol, atol=atol,
        events=events or None)
    if sol.status < 0:
        raise IntegrationError(
            "The integration failed: {}".format(sol.message))

    states = sol.y.T.copy()
    drift = 0.0
    for y in states:
        k = regularized_energy(params, c, PhaseState.from_array(y))
        drift = max(drift, abs(k - k0))
    if drift > config.drift_limit:
        raise IntegrationError(
            "The energy drifted by {:.3g} (limit {:.3g})".format(
                drift, config.drift_limit))

    states[:, 1] = (states[:, 1] + np.pi) % (2.0 * np.pi) - np.pi

    turns = {}
    for func, times in zip(events, sol.t_events or []):
        turns[func] = tuple(float(t) for t in times if t > 0.0)

    return Trajectory(
        params=params, c=c, taus=sol.t.copy(), states=states,
        energy_drift=float(drift),
        xi_turns=turns.get(_xi_turn, ()),
        eta_turns=turns.get(_eta_turn, ()),
        xi_frozen=xi_frozen, eta_frozen=eta_frozen)


def first_integral_drift(traj: Trajectory) -> float:
    """
    max |G(state) - G(state0)| over the samples.

    G is evaluated as K_lambda.  Off the shell the two differ by
    first_integral - K_lambda = -K cosh^2(lambda) / (cosh^2(lambda) -
    cos^2(nu)), so on K = 0 this is the G of first_integral, and unlike
    it K_lambda stays regular at the collisions.
    """
    values = np.array([
        separated_energies(traj.params, traj.c, PhaseState.from_array(y))[0]
        for y in traj.states])
    return float(np.max(np.abs(values - values[0])))


@dataclass(frozen=True)
class OscillationPeriods(object):
    """
    Empirical periods of the xi- and eta-oscillations and the number of
    oscillations each was measured over.
    """
    xi: float
    eta: float
    xi_oscillations: float
    eta_oscillations: float


def _period_from_turns(turns: Tuple[float, ...]) -> Tuple[float, float]:
    # consecutive turning points are half a period apart
    n = len(turns)
    if n < 2:
        return np.nan, 0.0

    return 2.0 * (turns[-1] - turns[0]) / (n - 1), 0.5 * (n - 1)


def oscillation_periods(traj: Trajectory) -> OscillationPeriods:
    """
    Measure the periods tau_xi and tau_eta from the turning events.

    In the S- and S'-regions lambda (resp. nu) swings through 0
    (resp. pi), and its own period is twice that of xi (resp. eta).
    """
    xi, n_xi = _period_from_turns(traj.xi_turns)
    eta, n_eta = _period_from_turns(traj.eta_turns)
    return OscillationPeriods(xi, eta, n_xi, n_eta)


@dataclass(frozen=True)
class EmpiricalRotation(object):
    """
    Rotation number estimated from a trajectory.

    `is_torus` is False for the critical orbits on which one of the
    coordinates does not oscillate; `value` is then +inf or 0.
    """
    value: float
    uncertainty: float
    is_torus: bool = True


def oscillation_count(turns: Tuple[float, ...], tau_end: float) -> float:
    """
    Number of full oscillations in [0, tau_end] from the turning times.

    Each turning point is a sign change of the velocity of the
    coordinate, and a full oscillation has two.  The pieces before the
    first and after the last turn are added as fractions of the mean
    half-period, i.e. by linear interpolation.
    """
    n = len(turns)
    if n < 2:
        return 0.5 * n

    half = (turns[-1] - turns[0]) / (n - 1)
    ends = (turns[0] + tau_end - turns[-1]) / half
    return 0.5 * (n - 1 + ends)


def empirical_rotation(traj: Trajectory,
                       min_oscillations: int = 10) -> EmpiricalRotation:
    """
    Estimate R = tau_eta / tau_xi as the ratio of the numbers of xi- and
    eta-oscillations over the trajectory.

    The oscillations are counted by the sign changes of the velocities
    of xi and eta (the turning events), with the end correction of
    oscillation_count.  The uncertainty is 1 / (the smaller number of
    whole oscillations).
    """
    if traj.xi_frozen or traj.eta_frozen:
        value = np.inf if traj.xi_frozen else 0.0
        return EmpiricalRotation(value, np.nan, False)

    periods = oscillation_periods(traj)
    fewest = min(periods.xi_oscillations, periods.eta_oscillations)
    if fewest < min_oscillations:
        raise InsufficientData(
            "{} oscillations found, {} required".format(
                fewest, min_oscillations))

    tau_end = float(traj.taus[-1])
    n_xi = oscillation_count(traj.xi_turns, tau_end)
    n_eta = oscillation_count(traj.eta_turns, tau_end)
    return EmpiricalRotation(float(n_xi / n_eta), float(1.0 / fewest))


def to_cartesian(state: PhaseState) -> CartesianState:
    """
    Positions and momenta in the plane.

    The momenta solve J^T p = (p_lambda, p_nu) with J the Jacobian of
    (q1, q2) with respect to (lambda, nu); at the collisions J is
    singular and only the positions are returned.

    Examples
    --------
    >>> to_cartesian(PhaseState(0.0, 0.0, 0.0, 0.0)).q1
    0.5
    """
    sh, ch = np.sinh(state.lam), np.cosh(state.lam)
    sn, cn = np.sin(state.nu), np.cos(state.nu)
    q1 = 0.5 * ch * cn
    q2 = 0.5 * sh * sn
    if sh * sh + sn * sn < 1e-24:
        return CartesianState(float(q1), float(q2))

    jac = 0.5 * np.array([[sh * cn, -ch * sn],
                          [ch * sn, sh * cn]])
    p = np.linalg.solve(jac.T, np.array([state.p_lam, state.p_nu]))
    return CartesianState(float(q1), float(q2), float(p[0]), float(p[1]))


def hamiltonian(params: ProblemParams, q, p) -> float:
    """
    The energy 1/2 |p|^2 - (1 - mu)/|q - E| - mu/|q - M|.
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    r_e = np.linalg.norm(q - EARTH)
    r_m = np.linalg.norm(q - MOON)
    return float(0.5 * p @ p - (1.0 - params.mu) / r_e - params.mu / r_m)
