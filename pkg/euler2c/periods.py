"""
Oscillation periods of xi and eta.

The closed forms express the periods by complete elliptic integrals;
`period_oracle` integrates the same quantity numerically and serves as
an independent check.

A period tau is the time of one full oscillation of xi (resp. eta) in
the regularized time, i.e. twice the time between consecutive turning
points.  With this normalization the interior collision orbit at
mu = 1/2, c = -3 has tau_xi = pi / 4.
"""
from dataclasses import dataclass, field
import enum
from logging import getLogger
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from euler2c import config
from euler2c.core import (
    Collision, Component, EnergyMomentum, OrbitKind, ProblemParams, Region,
    RegionTag, classify, oscillation_ranges, quartic_roots)
from euler2c.errors import DivergentIntegral, DomainError
from euler2c.special_functions import complete_k

logger = getLogger(__name__)

SQRT2 = np.sqrt(2.0)


class Axis(enum.Enum):
    XI = 'xi'
    ETA = 'eta'


@dataclass(frozen=True)
class PeriodPair(object):
    """
    Periods of the xi- and eta-oscillations; either may be +inf.
    """
    tau_xi: float
    tau_eta: float


@dataclass(frozen=True)
class ModuliSet(object):
    """
    The squared moduli of the period integrals.

    Undefined moduli (a negative radicand) are NaN.
    `applicable` names the moduli the region of the point uses.
    """
    k1_sq: float
    k2_sq: float
    r1_sq: float
    r2_sq: float
    r3_sq: float
    r4_sq: float
    a_mu: float
    b: float
    applicable: FrozenSet[str] = field(default_factory=frozenset)


def _sqrt(x: float) -> float:
    return float(np.sqrt(x)) if x >= 0.0 else np.nan


def _div(a: float, b: float) -> float:
    return a / b if b != 0.0 else np.nan


def moduli(em: EnergyMomentum,
           tag: Optional[RegionTag] = None) -> ModuliSet:
    """
    Evaluate the six squared moduli at (g, c).

    Examples
    --------
    >>> from euler2c.core import EnergyMomentum
    >>> m = moduli(EnergyMomentum.at(0.5, 1.0, -3.0))
    >>> m.k1_sq
    0.0
    """
    g, c = em.g, em.c
    beta = em.params.beta
    b = g - c
    a0 = _sqrt(1.0 - g * c)
    a_mu = _sqrt(beta * beta - g * c)
    d4 = _sqrt((g + c) ** 2 - 4.0 * beta * beta)

    k1_sq = 0.5 * (1.0 - _div(b, 2.0 * a0))
    k2_sq = _div(4.0 * a0, 2.0 * a0 - b)
    r1_sq = 0.5 * (1.0 - _div(b, 2.0 * a_mu))
    r2_sq = _div(b - 2.0 * a_mu, b + 2.0 * a_mu)
    r3_sq = _div(4.0 * a_mu, -b + 2.0 * a_mu)
    r4_sq = 0.5 * (1.0 + _div(b, d4))

    tag = tag or classify(em)
    region = tag.region
    applicable = set()
    if region in (Region.SPRIME, Region.S, Region.L):
        applicable.add('k1_sq')
    elif region == Region.P:
        applicable.add('k2_sq')

    if region == Region.SPRIME:
        applicable.add('r1_sq')
    elif region == Region.S:
        applicable.add('r2_sq')
    elif region in (Region.L, Region.P):
        applicable.add(
            'r3_sq' if beta * beta >= g * c else 'r4_sq')

    return ModuliSet(
        k1_sq=float(k1_sq), k2_sq=float(k2_sq),
        r1_sq=float(r1_sq), r2_sq=float(r2_sq),
        r3_sq=float(r3_sq), r4_sq=float(r4_sq),
        a_mu=float(a_mu), b=float(b),
        applicable=frozenset(applicable))


def scaled_k(m: float, factor: float = 1.0) -> float:
    """
    Return factor * K(m), or +inf if m is within config.divergence_gap
    of 1 (or beyond).

    Small negative m caused by rounding are treated as 0.
    """
    if np.isnan(m):
        raise DomainError("The squared modulus is undefined here.")
    if m >= 1.0 - config.divergence_gap:
        return np.inf
    if m < 0.0:
        if m < -1e-12:
            raise DomainError(
                "Negative squared modulus {:.17g}".format(m))
        m = 0.0

    try:
        return factor * complete_k(m)
    except DivergentIntegral:
        return np.inf


def critical_orbit_kind(tag: RegionTag) -> OrbitKind:
    """
    The critical orbit that a point on a critical curve represents.
    """
    region = tag.region
    if region == Region.ON_L1:
        return OrbitKind.EXTERIOR_EARTH
    if region == Region.ON_L2:
        return OrbitKind.EXTERIOR_MOON
    if region == Region.ON_L3:
        if tag.collision == Collision.INTERIOR:
            return OrbitKind.INTERIOR
        return OrbitKind.DOUBLE
    if region == Region.ON_L4:
        return OrbitKind.HYPERBOLIC

    return OrbitKind.ELLIPTIC


def period_closed_form(em: EnergyMomentum,
                       component: Component = Component.WHOLE,
                       tag: Optional[RegionTag] = None) -> PeriodPair:
    """
    Closed-form periods (tau_xi, tau_eta) at (g, c).

    On a critical curve the periods of the corresponding critical
    orbit are returned.

    Parameters
    ----------
    em: EnergyMomentum
        The point.
    component: Component
        The Moon component is refused in the S'-region.
        The S-region formulas hold for both components.
    tag: RegionTag, optional
        The classification of em, if already known.
    """
    tag = tag or classify(em)
    region = tag.region
    if region == Region.FORBIDDEN:
        raise DomainError(
            "({}, {}) lies in the forbidden region.".format(em.g, em.c))

    if region.is_curve:
        return critical_orbit_periods(
            em.params, em.c, critical_orbit_kind(tag))

    if region == Region.SPRIME and component == Component.MOON:
        raise DomainError(
            "The motion in the S'-region is confined to the Earth "
            "component.")

    g, c = em.g, em.c
    beta = em.params.beta
    mod = moduli(em, tag)
    a0 = np.sqrt(1.0 - g * c)

    if region == Region.P:
        tau_xi = scaled_k(mod.k2_sq, SQRT2 / np.sqrt(-g + c + 2.0 * a0))
    else:
        tau_xi = scaled_k(mod.k1_sq, 1.0 / (SQRT2 * np.sqrt(a0)))

    if region == Region.SPRIME:
        tau_eta = scaled_k(mod.r1_sq, 1.0 / (SQRT2 * np.sqrt(mod.a_mu)))
    elif region == Region.S:
        tau_eta = scaled_k(
            mod.r2_sq, SQRT2 / np.sqrt(g - c + 2.0 * mod.a_mu))
    elif beta * beta >= g * c:
        tau_eta = scaled_k(
            mod.r3_sq, SQRT2 / np.sqrt(-g + c + 2.0 * mod.a_mu))
    else:
        d4 = (g + c) ** 2 - 4.0 * beta * beta
        tau_eta = scaled_k(mod.r4_sq, SQRT2 / d4 ** 0.25)

    return PeriodPair(float(tau_xi), float(tau_eta))


def critical_orbit_periods(params: ProblemParams, c: float,
                           kind: OrbitKind) -> PeriodPair:
    """
    Periods of the critical orbits.

    Each critical orbit is a limit of Liouville tori; its periods are the
    limits of the regular-region periods on the corresponding curve.
    Infinite periods are returned as +inf.

    Parameters
    ----------
    params: ProblemParams
        The problem parameters.
    c: float
        The energy, inside the existence window of the orbit.
    kind: OrbitKind
        The critical orbit.
    """
    params.check_window(kind, c)
    mu, beta = params.mu, params.beta
    s = np.sqrt(mu * (1.0 - mu))

    if kind == OrbitKind.INTERIOR:
        a = np.sqrt(c * c + 2.0 * c + beta * beta)
        r2_sq = (-c - 1.0 - a) / (-c - 1.0 + a)
        tau_xi = np.pi / (2.0 * np.sqrt(2.0 * (-1.0 - c)))
        tau_eta = scaled_k(r2_sq, 1.0 / np.sqrt(-c - 1.0 + a))

    elif kind in (OrbitKind.EXTERIOR_EARTH, OrbitKind.EXTERIOR_MOON):
        sign = 1.0 if kind == OrbitKind.EXTERIOR_EARTH else -1.0
        # on l1 (sign +1) or l2 (sign -1): g = -c + 2 sign beta
        a0 = np.sqrt(c * c - 2.0 * sign * beta * c + 1.0)
        k1_sq = 0.5 * (1.0 - (sign * beta - c) / a0)
        tau_xi = scaled_k(k1_sq, 1.0 / (SQRT2 * np.sqrt(a0)))
        gap = sign * beta - c
        if gap > 0.0:
            tau_eta = np.pi / (2.0 * np.sqrt(2.0 * gap))
        else:
            tau_eta = np.inf

    elif kind == OrbitKind.DOUBLE:
        if c < params.c_e:
            tau_xi = np.pi / (2.0 * np.sqrt(2.0 * (-1.0 - c)))
        else:
            tau_xi = np.inf
        if c < -1.0 + 2.0 * s:
            r4_sq = 0.5 * (1.0 - (c + 1.0) / (2.0 * s))
            tau_eta = scaled_k(r4_sq, 1.0 / (SQRT2 * np.sqrt(s)))
        else:
            a = np.sqrt(c * c + 2.0 * c + beta * beta)
            r3_sq = 2.0 * a / (c + 1.0 + a)
            tau_eta = scaled_k(r3_sq, 1.0 / np.sqrt(c + 1.0 + a))

    elif kind == OrbitKind.HYPERBOLIC:
        k1_sq = 0.5 * (1.0 - (beta * beta - c * c) / (4.0 * c * s))
        tau_xi = scaled_k(k1_sq, 1.0 / (2.0 * np.sqrt(s)))
        tau_eta = np.inf

    else:
        q = c ** 4 + 2.0 * c * c + 1.0 - 4.0 * beta * beta * c * c
        r4_sq = 0.5 * (1.0 + (c * c - 1.0) / np.sqrt(q))
        tau_xi = np.pi * np.sqrt(-c) / np.sqrt(2.0 * (1.0 - c * c))
        tau_eta = scaled_k(r4_sq, np.sqrt(-2.0 * c) / q ** 0.25)

    return PeriodPair(float(tau_xi), float(tau_eta))


def _factor_roots(em: EnergyMomentum, axis: Axis) -> List[complex]:
    roots = quartic_roots(em)
    pair = roots.xi if axis == Axis.XI else roots.eta
    if pair.is_complex:
        quad = [complex(pair.first, pair.second),
                complex(pair.first, -pair.second)]
    else:
        quad = [pair.first, pair.second]

    return quad + [1.0, -1.0]


def quadrature_period(lead: float, roots: Sequence[complex],
                      interval: Tuple[float, float]) -> float:
    """
    Period (1/sqrt(2)) * integral of 1/sqrt(F) over the interval, where
    F(s) = lead * prod(s - z) over the four roots and both ends of the
    interval are among the roots.

    The substitution s = a + (b - a) sin^2(t) removes the square-root
    singularities at the turning points, leaving the smooth integrand
    2 / sqrt(q(s)) with q = F / ((s - a)(b - s)) on [0, pi/2].
    """
    a, b = interval
    if not b > a:
        raise DomainError(
            "The oscillation interval ({}, {}) has no length.".format(a, b))

    rest = list(roots)
    for end in (a, b):
        i = min(range(len(rest)), key=lambda j: abs(rest[j] - end))
        rest.pop(i)

    z1, z2 = rest

    def integrand(theta: float) -> float:
        s = a + (b - a) * np.sin(theta) ** 2
        q = (-lead * (s - z1) * (s - z2)).real
        return 2.0 / np.sqrt(q)

    value, abserr = integrate.quad(
        integrand, 0.0, np.pi / 2.0, epsabs=0.0,
        epsrel=config.quad_epsrel, limit=config.quad_limit)
    logger.debug("quad over ({:.17g}, {:.17g}) = {:.17g} +- {:.3g}".format(
        a, b, value, abserr))
    return float(value / SQRT2)


def period_oracle(em: EnergyMomentum, axis: Axis,
                  component: Component = Component.WHOLE) -> float:
    """
    Numerical period of the xi- or eta-oscillation.

    Independent of the closed forms: it only uses the turning points
    from `oscillation_ranges` and adaptive quadrature.

    Parameters
    ----------
    em: EnergyMomentum
        A regular point.
    axis: Axis
        Xi or Eta.
    component: Component
        Earth or Moon in the S-region.
    """
    xi_range, eta_range = oscillation_ranges(em, component)
    interval = xi_range if axis == Axis.XI else eta_range
    return quadrature_period(em.c, _factor_roots(em, axis), interval)
