"""
Problem parameters, the defining quadratics and the classification
of points (g, c) of the energy-momentum plane.

The Earth sits at (-1/2, 0) with mass 1 - mu and the Moon at (1/2, 0)
with mass mu, 0 < mu <= 1/2.  beta = 1 - 2 mu appears throughout.
"""
from dataclasses import dataclass
import enum
from logging import getLogger
from typing import Dict, Optional, Tuple

import numpy as np

from euler2c import config
from euler2c.errors import DomainError

logger = getLogger(__name__)

Interval = Tuple[float, float]


class Region(enum.Enum):
    SPRIME = 'Sprime'
    S = 'S'
    L = 'L'
    P = 'P'
    ON_L1 = 'OnL1'
    ON_L2 = 'OnL2'
    ON_L3 = 'OnL3'
    ON_L4 = 'OnL4'
    ON_L5 = 'OnL5'
    FORBIDDEN = 'Forbidden'

    @property
    def is_regular(self) -> bool:
        return self in (Region.SPRIME, Region.S, Region.L, Region.P)

    @property
    def is_curve(self) -> bool:
        return self.value.startswith('OnL')


class Collision(enum.Enum):
    """
    Sub-variant of the curve l3.
    """
    INTERIOR = 'InteriorCollision'
    DOUBLE = 'DoubleCollision'


class Component(enum.Enum):
    EARTH = 'Earth'
    MOON = 'Moon'
    WHOLE = 'Whole'


class OrbitKind(enum.Enum):
    """
    Critical orbits, i.e. the singular leaves of the foliation.
    """
    INTERIOR = 'int'
    EXTERIOR_EARTH = 'extE'
    EXTERIOR_MOON = 'extM'
    DOUBLE = 'dou'
    HYPERBOLIC = 'hyp'
    ELLIPTIC = 'ell'


@dataclass(frozen=True)
class ProblemParams(object):
    """
    Mass ratio and the derived critical values.

    Attributes
    ----------
    mu: float
        The mass ratio of the Moon, 0 < mu <= 1/2.
    c_jacobi: float
        The critical Jacobi energy, the value of H at the critical point L.
    c_e: float
        The energy above which the elliptic orbit exists (always -1).
    c_h: float
        The energy below which the hyperbolic orbit exists.
    l_crit: float
        The q1-coordinate of the critical point L.
    l_earth: float
        The distance from the Earth to L.
    """
    mu: float
    c_jacobi: float
    c_e: float
    c_h: float
    l_crit: float
    l_earth: float

    @property
    def beta(self) -> float:
        return 1.0 - 2.0 * self.mu

    def window(self, kind: OrbitKind) -> Interval:
        """
        Return the open energy interval in which the critical orbit
        of the given kind exists.
        """
        if kind == OrbitKind.INTERIOR:
            return (-np.inf, self.c_jacobi)
        if kind in (OrbitKind.EXTERIOR_EARTH, OrbitKind.EXTERIOR_MOON):
            return (-np.inf, 0.0)
        if kind == OrbitKind.DOUBLE:
            return (self.c_jacobi, 0.0)
        if kind == OrbitKind.HYPERBOLIC:
            return (self.c_jacobi, self.c_h)

        return (self.c_e, 0.0)

    def check_window(self, kind: OrbitKind, c: float) -> None:
        lo, hi = self.window(kind)
        if not lo < c < hi:
            raise DomainError(
                "The {} orbit exists for {} < c < {}, got c={}".format(
                    kind.name.lower(), lo, hi, c))


@dataclass(frozen=True)
class EnergyMomentum(object):
    """
    A point (g, c) of the energy-momentum plane at a mass ratio.
    """
    params: ProblemParams
    g: float
    c: float

    def __post_init__(self):
        if not self.c < 0.0:
            raise DomainError(
                "Only negative energies are treated, got c={}".format(
                    self.c))

    @classmethod
    def at(cls, mu: float, g: float, c: float) -> 'EnergyMomentum':
        return cls(critical_constants(mu), float(g), float(c))


@dataclass(frozen=True)
class RootPair(object):
    """
    The two roots of a real quadratic.

    If is_complex is False, first <= second are the real roots.
    Otherwise first is the common real part and second the positive
    imaginary part.
    """
    first: float
    second: float
    is_complex: bool = False


@dataclass(frozen=True)
class QuarticRoots(object):
    """
    Roots of c x^2 + 2 x + g (xi) and c y^2 + 2 beta y + g (eta).
    """
    xi: RootPair
    eta: RootPair

    @property
    def xi1(self) -> float:
        return self.xi.first

    @property
    def xi2(self) -> float:
        return self.xi.second

    @property
    def eta1(self) -> float:
        return self.eta.first

    @property
    def eta2(self) -> float:
        return self.eta.second


@dataclass(frozen=True)
class RegionTag(object):
    region: Region
    collision: Optional[Collision] = None

    @property
    def name(self) -> str:
        if self.collision is not None:
            return '{}/{}'.format(self.region.value, self.collision.value)

        return self.region.value


def critical_constants(mu: float) -> ProblemParams:
    """
    Compute the critical energies and the critical point.

    Parameters
    ----------
    mu: float
        The mass ratio, 0 < mu <= 1/2.

    Return
    ------
    ProblemParams
        The parameters.

    Examples
    --------
    >>> from euler2c.core import critical_constants
    >>> p = critical_constants(0.5)
    >>> (p.c_jacobi, p.c_e, p.c_h, p.l_crit)
    (-2.0, -1.0, 0.0, 0.0)
    """
    mu = float(mu)
    if not 0.0 < mu <= 0.5:
        raise DomainError(
            "The mass ratio must satisfy 0 < mu <= 1/2, got {}".format(mu))

    s = np.sqrt(mu * (1.0 - mu))
    se, sm = np.sqrt(1.0 - mu), np.sqrt(mu)
    # (1 - 2s) / (2 (1 - 2mu)) without the 0/0 at mu = 1/2
    l_crit = (se - sm) / (2.0 * (se + sm))
    return ProblemParams(
        mu=mu,
        c_jacobi=float(-1.0 - 2.0 * s),
        c_e=-1.0,
        c_h=-1.0 + 2.0 * mu,
        l_crit=float(l_crit),
        l_earth=float(se / (se + sm)))


def _stable_roots(c: float, b: float, g: float) -> RootPair:
    # roots of c x^2 + 2 b x + g with c < 0 and b >= 0
    disc = b * b - g * c
    if disc < 0.0:
        return RootPair(-b / c, np.sqrt(-disc) / -c, True)

    q = b + np.sqrt(disc)
    if q == 0.0:
        return RootPair(0.0, 0.0)

    upper = -q / c
    lower = -g / q
    return RootPair(float(min(lower, upper)), float(max(lower, upper)))


def quartic_roots(em: EnergyMomentum) -> QuarticRoots:
    """
    Roots of the quadratic factors of f(xi) and h(eta).

    Examples
    --------
    >>> from euler2c.core import EnergyMomentum, quartic_roots
    >>> quartic_roots(EnergyMomentum.at(0.5, 1.0, -3.0)).xi
    RootPair(first=-0.3333333333333333, second=1.0, is_complex=False)
    """
    return QuarticRoots(
        xi=_stable_roots(em.c, 1.0, em.g),
        eta=_stable_roots(em.c, em.params.beta, em.g))


def curve_residuals(em: EnergyMomentum) -> Dict[Region, Optional[float]]:
    """
    Residuals of the critical-curve equations at em, in the order
    the classification tests them.

    Curves l4 and l5 exist only inside their energy windows;
    outside of them the residual is None.
    """
    p, g, c = em.params, em.g, em.c
    beta = p.beta
    return {
        Region.ON_L1: c + g - 2.0 * beta,
        Region.ON_L2: c + g + 2.0 * beta,
        Region.ON_L3: c + g + 2.0,
        Region.ON_L4: (g * c - beta * beta
                       if p.c_jacobi < c < p.c_h else None),
        Region.ON_L5: g * c - 1.0 if c > p.c_e else None,
    }


def _table_region(roots: QuarticRoots) -> Region:
    xi, eta = roots.xi, roots.eta
    if xi.is_complex:
        return Region.FORBIDDEN

    eta_above = eta.is_complex or eta.first > 1.0
    if -1.0 < xi.first < 1.0 < xi.second:
        if not eta.is_complex:
            if -1.0 < eta.first < 1.0 < eta.second:
                return Region.SPRIME
            if -1.0 < eta.first < eta.second < 1.0:
                return Region.S
        if eta_above:
            return Region.L
    elif 1.0 < xi.first < xi.second and eta_above:
        return Region.P

    return Region.FORBIDDEN


def classify(em: EnergyMomentum,
             delta_curve: Optional[float] = None) -> RegionTag:
    """
    Classify (g, c) into a region or a critical curve.

    Curve tags take precedence when the curve equation holds within
    delta_curve.  For mu = 1/2 the curves l1 and l2 coincide and such
    points are tagged OnL1.

    Parameters
    ----------
    em: EnergyMomentum
        The point.
    delta_curve: float, optional
        Absolute tolerance of the curve-equation residual.
        The default is config.delta_curve.

    Return
    ------
    RegionTag
        The region, or the curve with the collision sub-variant for l3.
    """
    if delta_curve is None:
        delta_curve = config.delta_curve

    for region, residual in curve_residuals(em).items():
        if residual is None or abs(residual) > delta_curve:
            continue

        if region == Region.ON_L3:
            collision = Collision.INTERIOR \
                if em.c < em.params.c_jacobi else Collision.DOUBLE
            return RegionTag(region, collision)

        return RegionTag(region)

    return RegionTag(_table_region(quartic_roots(em)))


def oscillation_ranges(em: EnergyMomentum,
                       component: Component = Component.WHOLE,
                       tag: Optional[RegionTag] = None
                       ) -> Tuple[Interval, Interval]:
    """
    The intervals swept by xi and eta on the Liouville torus (g, c).

    Parameters
    ----------
    em: EnergyMomentum
        A point of a regular region.
    component: Component
        Earth or Moon in the S-region, Earth (or Whole) in S'.
        Ignored in L and P.
    tag: RegionTag, optional
        The classification of em, if already known.

    Return
    ------
    tuple
        ((xi_min, xi_max), (eta_min, eta_max))
    """
    tag = tag or classify(em)
    region = tag.region
    if not region.is_regular:
        raise DomainError("({}, {}) is not a regular point: {}".format(
            em.g, em.c, tag.name))

    roots = quartic_roots(em)
    if region == Region.P:
        xi_range = (roots.xi1, roots.xi2)
    else:
        xi_range = (1.0, roots.xi2)

    if region == Region.SPRIME:
        if component == Component.MOON:
            raise DomainError(
                "The motion in the S'-region is confined to the Earth "
                "component.")
        eta_range = (-1.0, roots.eta1)
    elif region == Region.S:
        if component == Component.EARTH:
            eta_range = (-1.0, roots.eta1)
        elif component == Component.MOON:
            eta_range = (roots.eta2, 1.0)
        else:
            raise DomainError(
                "The S-region has two components; choose Earth or Moon.")
    else:
        eta_range = (-1.0, 1.0)

    return xi_range, eta_range


def admissible_g_interval(params: ProblemParams, c: float,
                          region: Region) -> Optional[Interval]:
    """
    The open interval of g values of a region at energy c,
    or None if the region does not meet the energy level.
    """
    beta = params.beta
    if region == Region.SPRIME:
        lo, hi = -c - 2.0 * beta, -c + 2.0 * beta
    elif region == Region.S:
        if not c < params.c_h:
            return None
        lo, hi = max(-c - 2.0, beta * beta / c), -c - 2.0 * beta
    elif region == Region.L:
        if not c > params.c_jacobi:
            return None
        lo = -c - 2.0
        hi = beta * beta / c if c < params.c_h else -c - 2.0 * beta
    elif region == Region.P:
        if not c > params.c_e:
            return None
        lo, hi = 1.0 / c, -c - 2.0
    else:
        raise DomainError("{} is not a regular region.".format(region.value))

    if not lo < hi:
        return None

    return (float(lo), float(hi))


def critical_curves(params: ProblemParams,
                    c: float) -> Dict[str, Optional[float]]:
    """
    The g-values at which the energy level c meets the critical
    curves l1 .. l5.  None marks a curve that does not exist at c.
    """
    beta = params.beta
    return {
        'l1': 2.0 * beta - c,
        'l2': -2.0 * beta - c,
        'l3': -2.0 - c,
        'l4': beta * beta / c if params.c_jacobi < c < params.c_h else None,
        'l5': 1.0 / c if c > params.c_e else None,
    }
