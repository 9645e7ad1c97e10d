"""
Rotation functions R = tau_eta / tau_xi of the Liouville tori and of the
critical orbits, finite-difference monotonicity surveys, and tracing of
the curves R(g, c) = k/l (T_{k,l}-torus families).
"""
from dataclasses import dataclass, field
from logging import getLogger
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from euler2c import config
from euler2c.core import (
    EnergyMomentum, OrbitKind, ProblemParams, Region, RegionTag,
    admissible_g_interval, classify, critical_curves)
from euler2c.errors import DomainError
from euler2c.periods import moduli, period_closed_form, scaled_k
from euler2c.special_functions import complete_k

logger = getLogger(__name__)


@dataclass(frozen=True)
class RotationValue(object):
    """
    An extended real rotation number.

    `exact` marks the sentinels +inf and 0 that the formulas return on
    critical curves, as opposed to values computed to be small or large.
    Consumers must branch on them instead of doing arithmetic.
    """
    value: float
    exact: bool = False

    @classmethod
    def infinite(cls) -> 'RotationValue':
        return cls(np.inf, True)

    @classmethod
    def zero(cls) -> 'RotationValue':
        return cls(0.0, True)

    @property
    def is_infinite(self) -> bool:
        return np.isinf(self.value)

    @property
    def is_zero(self) -> bool:
        return self.exact and self.value == 0.0


def _finite(value: float) -> RotationValue:
    if np.isinf(value):
        return RotationValue.infinite()

    return RotationValue(float(value))


def rotation_number(em: EnergyMomentum,
                    tag: Optional[RegionTag] = None) -> RotationValue:
    """
    Rotation function of a regular region.

    Parameters
    ----------
    em: EnergyMomentum
        A point of S', S, L or P.
    tag: RegionTag, optional
        The classification of em, if already known.

    Return
    ------
    RotationValue
        The rotation number of the torus through (g, c).
    """
    tag = tag or classify(em)
    region = tag.region
    if not region.is_regular:
        raise DomainError(
            "({}, {}) is not a regular point: {}. "
            "Use critical_rotation for critical orbits.".format(
                em.g, em.c, tag.name))

    g, c = em.g, em.c
    beta = em.params.beta
    mod = moduli(em, tag)
    one_gc = 1.0 - g * c

    if region == Region.P:
        denom = scaled_k(mod.k2_sq)
        base = -g + c + 2.0 * np.sqrt(one_gc)
        if beta * beta >= g * c:
            factor = np.sqrt(base / (-g + c + 2.0 * mod.a_mu))
            numer = scaled_k(mod.r3_sq)
        else:
            d4 = (g + c) ** 2 - 4.0 * beta * beta
            factor = np.sqrt(base / np.sqrt(d4))
            numer = scaled_k(mod.r4_sq)
        return _finite(factor * numer / denom)

    denom = scaled_k(mod.k1_sq)
    if region == Region.SPRIME:
        factor = (one_gc / (beta * beta - g * c)) ** 0.25
        numer = scaled_k(mod.r1_sq)
    elif region == Region.S:
        factor = 2.0 * np.sqrt(
            np.sqrt(one_gc) / (g - c + 2.0 * mod.a_mu))
        numer = scaled_k(mod.r2_sq)
    elif beta * beta >= g * c:
        factor = 2.0 * np.sqrt(
            np.sqrt(one_gc) / (-g + c + 2.0 * mod.a_mu))
        numer = scaled_k(mod.r3_sq)
    else:
        d4 = (g + c) ** 2 - 4.0 * beta * beta
        factor = 2.0 * (one_gc / d4) ** 0.25
        numer = scaled_k(mod.r4_sq)

    return _finite(factor * numer / denom)


def critical_rotation(params: ProblemParams, c: float,
                      kind: OrbitKind) -> RotationValue:
    """
    Rotation number of a critical orbit at energy c.

    Examples
    --------
    >>> from euler2c.core import critical_constants, OrbitKind
    >>> r = critical_rotation(critical_constants(0.25), -0.5, OrbitKind.DOUBLE)
    >>> (r.value, r.exact)
    (0.0, True)
    """
    params.check_window(kind, c)
    mu, beta = params.mu, params.beta
    s = np.sqrt(mu * (1.0 - mu))

    if kind == OrbitKind.INTERIOR:
        a = np.sqrt(c * c + 2.0 * c + beta * beta)
        r2_sq = (-c - 1.0 - a) / (-c - 1.0 + a)
        return _finite(
            2.0 / np.pi * np.sqrt(1.0 + r2_sq) * scaled_k(r2_sq))

    if kind in (OrbitKind.EXTERIOR_EARTH, OrbitKind.EXTERIOR_MOON):
        sign = 1.0 if kind == OrbitKind.EXTERIOR_EARTH else -1.0
        gap = sign * beta - c
        if gap <= 0.0:
            return RotationValue.infinite()
        a0 = np.sqrt(c * c - 2.0 * sign * beta * c + 1.0)
        # 1 - 2 k1^2 = gap / a0
        k1_sq = 0.5 * (1.0 - gap / a0)
        return _finite(
            np.pi / 2.0 / (np.sqrt(gap / a0) * scaled_k(k1_sq)))

    if kind == OrbitKind.DOUBLE:
        if c >= params.c_e:
            return RotationValue.zero()
        r4_sq = 0.5 * (1.0 - (c + 1.0) / (2.0 * s))
        return _finite(
            2.0 / np.pi * np.sqrt(4.0 * r4_sq - 2.0) * scaled_k(r4_sq))

    if kind == OrbitKind.HYPERBOLIC:
        return RotationValue.infinite()

    q = c ** 4 + 2.0 * c * c + 1.0 - 4.0 * beta * beta * c * c
    r4_sq = 0.5 * (1.0 + (c * c - 1.0) / np.sqrt(q))
    return _finite(
        2.0 / np.pi * np.sqrt(1.0 - 2.0 * r4_sq) * scaled_k(r4_sq))


# Direction of monotonicity of the critical rotation functions.
CRITICAL_DIRECTION = {
    OrbitKind.INTERIOR: 1,
    OrbitKind.EXTERIOR_EARTH: 1,
    OrbitKind.EXTERIOR_MOON: 1,
    OrbitKind.DOUBLE: -1,
    OrbitKind.ELLIPTIC: 1,
}


def critical_energy_for_rotation(params: ProblemParams, kind: OrbitKind,
                                 value: float) -> float:
    """
    Invert a monotone critical rotation function: find c in the
    existence window of the orbit with R(c) = value.

    Raises DomainError if the value is not attained.
    """
    if kind not in CRITICAL_DIRECTION:
        raise DomainError(
            "The rotation of the {} orbit is constant.".format(
                kind.name.lower()))

    lo, hi = params.window(kind)
    if kind == OrbitKind.EXTERIOR_MOON:
        hi = min(hi, params.c_h)
    if kind == OrbitKind.DOUBLE:
        hi = min(hi, params.c_e)

    def residual(c: float) -> float:
        return critical_rotation(params, c, kind).value - value

    direction = CRITICAL_DIRECTION[kind]
    margin = 1e-12 * max(1.0, abs(hi))
    b = hi - margin
    if np.isinf(lo):
        a = hi - 1.0
        while direction * residual(a) > 0.0:
            a = hi - 2.0 * (hi - a)
            if a < -1e12:
                raise DomainError(
                    "R={} is not attained by the {} orbit.".format(
                        value, kind.name.lower()))
    else:
        a = lo + 1e-12 * max(1.0, abs(lo))

    fa, fb = residual(a), residual(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if np.sign(fa) == np.sign(fb):
        raise DomainError("R={} is not attained by the {} orbit.".format(
            value, kind.name.lower()))

    root = optimize.bisect(residual, a, b, xtol=config.bisect_xtol,
                           maxiter=200)
    logger.debug("R_{}({:.17g}) = {}".format(kind.value, root, value))
    return float(root)


@dataclass(frozen=True)
class MonotonicityReport(object):
    """
    Signs of central finite differences on a grid.

    Attributes
    ----------
    target: str
        What was surveyed.
    expected: int or None
        +1 for increasing, -1 for decreasing, None for a survey.
    signs: tuple of int
        Sign of the difference at each grid point, 0 where undefined.
    violations: tuple of (float, float)
        Grid points and differences contradicting `expected`.
    """
    target: str
    expected: Optional[int]
    signs: Tuple[int, ...]
    violations: Tuple[Tuple[float, float], ...] = field(default=())

    @property
    def ok(self) -> bool:
        return len(self.violations) == 0

    @property
    def fixed_sign(self) -> Optional[int]:
        """
        The common sign of all differences, or None if they vanish or
        disagree somewhere.
        """
        signs = set(self.signs)
        if len(signs) == 1 and 0 not in signs:
            return signs.pop()

        return None


def finite_difference_signs(func: Callable[[float], float],
                            grid: Sequence[float],
                            expected: Optional[int] = None,
                            target: str = ''
                            ) -> MonotonicityReport:
    """
    Survey the sign of central differences of func on the grid.

    The step is config.fd_relative_step times the grid length;
    differences are one-sided at the ends of the grid.
    Points where func is not finite are skipped (sign 0).
    """
    grid = np.asarray(grid, dtype=float)
    lo, hi = float(grid[0]), float(grid[-1])
    h = config.fd_relative_step * (hi - lo) if hi > lo else 1e-8
    signs = []
    violations = []
    for x in grid:
        left, right = max(x - h, lo), min(x + h, hi)
        diff = func(right) - func(left)
        if not np.isfinite(diff):
            signs.append(0)
            continue

        sign = int(np.sign(diff))
        signs.append(sign)
        if expected is not None and sign != expected:
            violations.append((float(x), float(diff)))

    if violations:
        logger.warning("{}: {} monotonicity violations".format(
            target, len(violations)))

    return MonotonicityReport(
        target=target, expected=expected, signs=tuple(signs),
        violations=tuple(violations))


def verify_monotonicity(params: ProblemParams,
                        target: Union[Region, OrbitKind],
                        grid: Sequence[float],
                        c: Optional[float] = None,
                        expected: Optional[int] = None
                        ) -> MonotonicityReport:
    """
    Check the monotonicity of a rotation function.

    Parameters
    ----------
    params: ProblemParams
        The problem parameters.
    target: Region or OrbitKind
        A region (R_c as a function of g at the fixed energy c)
        or a critical orbit (R as a function of c).
    grid: sequence of float
        The g-values or energies to survey, inside the domain.
    c: float, optional
        The energy, required when target is a region.
    expected: int, optional
        +1 (increasing) or -1 (decreasing).  If omitted, the known
        direction of the critical rotation functions is used; regions
        are surveyed without assertion unless it is given.
    """
    if isinstance(target, OrbitKind):
        if expected is None:
            expected = CRITICAL_DIRECTION.get(target)

        def func(x: float) -> float:
            return critical_rotation(params, x, target).value

        name = 'R_{}'.format(target.value)
    else:
        if c is None:
            raise DomainError("The energy c is required for a region.")

        def func(x: float) -> float:
            return rotation_number(EnergyMomentum(params, x, c)).value

        name = 'R_{}(g; c={:.6g})'.format(target.value, c)

    return finite_difference_signs(func, grid, expected, name)


# Directions of (tau_xi, tau_eta) in g at a fixed energy.
PERIOD_DIRECTION = {
    Region.SPRIME: (-1, -1),
    Region.S: (-1, -1),
    Region.L: (-1, 1),
    Region.P: (1, 1),
}


def verify_period_monotonicity(params: ProblemParams, region: Region,
                               c: float, grid: Sequence[float]
                               ) -> Tuple[MonotonicityReport,
                                          MonotonicityReport]:
    """
    Check that tau_xi and tau_eta are monotone in g across a region
    at the energy c, in the directions of PERIOD_DIRECTION.

    Return
    ------
    (MonotonicityReport, MonotonicityReport)
        The reports of tau_xi and tau_eta.
    """
    if region not in PERIOD_DIRECTION:
        raise DomainError("{} is not a regular region.".format(
            region.value))

    def periods(x: float):
        return period_closed_form(EnergyMomentum(params, x, c))

    xi_sign, eta_sign = PERIOD_DIRECTION[region]
    xi = finite_difference_signs(
        lambda x: periods(x).tau_xi, grid, xi_sign,
        'tau_xi_{}(g; c={:.6g})'.format(region.value, c))
    eta = finite_difference_signs(
        lambda x: periods(x).tau_eta, grid, eta_sign,
        'tau_eta_{}(g; c={:.6g})'.format(region.value, c))
    return xi, eta


@dataclass(frozen=True)
class FamilySample(object):
    c: float
    g: float
    region: Region


@dataclass(frozen=True)
class TorusFamilyCurve(object):
    """
    Samples of the curve R(g, c) = k/l.

    Attributes
    ----------
    ratio: tuple(int, int)
        (k, l)
    samples: tuple of FamilySample
        Ordered by c, then g.
    endpoints: dict
        Energies at which a critical rotation function attains k/l,
        i.e. where the family meets a critical curve.
    terminals: dict
        For each region holding samples, the critical curves nearest to
        its lowest- and its highest-energy sample.
    omitted: tuple of float
        Energies without a solution.
    """
    ratio: Tuple[int, int]
    samples: Tuple[FamilySample, ...]
    endpoints: Dict[OrbitKind, float]
    terminals: Dict[Region, Tuple[Optional[str], Optional[str]]]
    omitted: Tuple[float, ...]


def _candidate_regions(k: int, l: int) -> List[Region]:
    # R > 1 in S' and S, 0 < R < 1 in P, anything in L
    if k > l:
        return [Region.SPRIME, Region.S, Region.L]
    if k < l:
        return [Region.L, Region.P]

    return [Region.L]


def _roots_in_interval(func: Callable[[float], float], lo: float,
                       hi: float, scan_points: int) -> List[float]:
    pad = 1e-9 * (hi - lo) + 10.0 * config.delta_curve
    xs = np.linspace(lo + pad, hi - pad, scan_points)
    values = [func(x) for x in xs]
    roots = []
    for x0, x1, f0, f1 in zip(xs[:-1], xs[1:], values[:-1], values[1:]):
        if not (np.isfinite(f0) and np.isfinite(f1)):
            continue
        if f0 == 0.0:
            roots.append(float(x0))
        elif f0 * f1 < 0.0:
            roots.append(float(optimize.brentq(
                func, x0, x1, xtol=config.bisect_xtol, rtol=1e-15)))

    return roots


def _nearest_curve(params: ProblemParams, sample: FamilySample
                   ) -> Optional[str]:
    curves = {name: g for name, g in critical_curves(
        params, sample.c).items() if g is not None}
    if not curves:
        return None

    return min(curves, key=lambda name: abs(curves[name] - sample.g))


def trace_torus_family(params: ProblemParams, k: int, l: int,
                       c_min: float, c_max: float, step: float,
                       scan_points: int = 64) -> TorusFamilyCurve:
    """
    Trace the T_{k,l}-torus family R(g, c) = k/l.

    For each energy of the discretized range the admissible g-interval
    of every region where the ratio can occur is scanned for sign
    changes of R - k/l, and every bracket is refined by Brent's method.

    Parameters
    ----------
    params: ProblemParams
        The problem parameters.
    k, l: int
        Coprime positive integers.
    c_min, c_max: float
        The energy range, c_max < 0.
    step: float
        The energy step.
    scan_points: int
        Number of points of the sign-change scan per interval.
    """
    if k <= 0 or l <= 0 or gcd(k, l) != 1:
        raise DomainError(
            "k={} and l={} must be coprime positive integers".format(k, l))
    if not c_min <= c_max < 0.0:
        raise DomainError("Invalid energy range [{}, {}]".format(
            c_min, c_max))

    target = k / l
    n = int(np.floor((c_max - c_min) / step + 1e-9)) + 1 if step > 0 else 1
    energies = [c_min + i * step for i in range(n)]

    samples = []
    omitted = []
    for c in energies:
        found = []
        for region in _candidate_regions(k, l):
            interval = admissible_g_interval(params, c, region)
            if interval is None:
                continue

            def residual(g: float) -> float:
                em = EnergyMomentum(params, g, c)
                tag = classify(em)
                if tag.region != region:
                    return np.nan
                return rotation_number(em, tag).value - target

            for g in _roots_in_interval(residual, *interval, scan_points):
                found.append(FamilySample(float(c), g, region))

        if found:
            samples.extend(sorted(found, key=lambda s: s.g))
        else:
            omitted.append(float(c))
            logger.debug("No T_{},{} torus at c={:.6g}".format(k, l, c))

    endpoints = {}
    for kind in CRITICAL_DIRECTION:
        try:
            ce = critical_energy_for_rotation(params, kind, target)
        except DomainError:
            continue
        if c_min <= ce <= c_max:
            endpoints[kind] = ce

    terminals = {}
    for region in _candidate_regions(k, l):
        branch = [s for s in samples if s.region == region]
        if branch:
            terminals[region] = (_nearest_curve(params, branch[0]),
                                 _nearest_curve(params, branch[-1]))

    return TorusFamilyCurve(
        ratio=(k, l), samples=tuple(samples), endpoints=endpoints,
        terminals=terminals, omitted=tuple(omitted))


@dataclass(frozen=True)
class ExteriorBound(object):
    maximum: float
    argmax: float
    earth_max: float
    moon_max: float
    dominance: bool


def exterior_bound_check(params: ProblemParams,
                         c_grid: Sequence[float]) -> ExteriorBound:
    """
    Maximum of the exterior collision rotation numbers over an energy
    grid below c_J, together with the pointwise check R_ext^E < R_ext^M.
    """
    best, argmax = -np.inf, np.nan
    earth_max = moon_max = -np.inf
    dominance = True
    for c in c_grid:
        if not c < params.c_jacobi:
            raise DomainError(
                "The grid must lie below c_J={}".format(params.c_jacobi))

        earth = critical_rotation(params, c, OrbitKind.EXTERIOR_EARTH).value
        moon = critical_rotation(params, c, OrbitKind.EXTERIOR_MOON).value
        earth_max = max(earth_max, earth)
        moon_max = max(moon_max, moon)
        # the two coincide for mu = 1/2
        if params.mu < 0.5 and not earth < moon:
            dominance = False
        if max(earth, moon) > best:
            best, argmax = max(earth, moon), float(c)

    return ExteriorBound(
        maximum=float(best), argmax=argmax, earth_max=float(earth_max),
        moon_max=float(moon_max), dominance=dominance)


def c_zero_threshold(params: ProblemParams) -> Optional[float]:
    """
    The energy c0 < c_J at which R_int equals the supremum
    pi / (2 sqrt(1 - 2mu) K(mu)) of R_ext^E.

    Return None for mu = 1/2, where the supremum is infinite and no such
    energy exists.
    """
    if params.mu >= 0.5:
        return None

    target = np.pi / (2.0 * np.sqrt(params.beta) * complete_k(params.mu))
    return critical_energy_for_rotation(params, OrbitKind.INTERIOR, target)
