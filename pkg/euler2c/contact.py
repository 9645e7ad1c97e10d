"""
Transversality of the Liouville vector field X = (q - E) d/dq to the
Earth component of the energy surface below c_J.

Points are written in polar coordinates (r, theta) centred at the Earth,
with theta = 0 pointing to the Moon.  By the reflection symmetry only
q2 >= 0, i.e. theta in [0, pi], is considered.  X(H) equals
r dV/dr on the energy surface, so the surface is of restricted contact
type if r dV/dr > 0 on the Hill region.
"""
from dataclasses import dataclass, field
from logging import getLogger
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from euler2c.core import ProblemParams
from euler2c.errors import DomainError

logger = getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class PolarPoint(object):
    r: float
    theta: float

    def __post_init__(self):
        if not self.r > 0.0:
            raise DomainError("The radius must be positive, got {}".format(
                self.r))


def _moon_distance(r: ArrayLike, theta: ArrayLike) -> ArrayLike:
    return np.sqrt(r * r - 2.0 * r * np.cos(theta) + 1.0)


def potential_values(mu: float, r: ArrayLike,
                     theta: ArrayLike) -> ArrayLike:
    return -(1.0 - mu) / r - mu / _moon_distance(r, theta)


def radial_values(mu: float, r: ArrayLike, theta: ArrayLike) -> ArrayLike:
    d = _moon_distance(r, theta)
    return (1.0 - mu) / (r * r) + mu * (r - np.cos(theta)) / d ** 3


def angular_values(mu: float, r: ArrayLike,
                   theta: ArrayLike) -> ArrayLike:
    # dU_r / dtheta
    d = _moon_distance(r, theta)
    return mu * np.sin(theta) * (
        -2.0 * r * r + r * np.cos(theta) + 1.0) / d ** 5


def _check_point(point: PolarPoint) -> None:
    if abs(point.r - 1.0) < 1e-15 and abs(np.sin(point.theta)) < 1e-15 \
            and np.cos(point.theta) > 0.0:
        raise DomainError("(r, theta) = (1, 0) is the Moon.")


def potential(params: ProblemParams, point: PolarPoint) -> float:
    """
    V(r, theta) = -(1 - mu)/r - mu/|q - M|.
    """
    _check_point(point)
    return float(potential_values(params.mu, point.r, point.theta))


def radial_derivative(params: ProblemParams, point: PolarPoint) -> float:
    """
    U_r(theta) = dV/dr
    = (1 - mu)/r^2 + mu (r - cos theta)/(r^2 - 2 r cos theta + 1)^(3/2).

    Examples
    --------
    >>> from euler2c.core import critical_constants
    >>> p = critical_constants(0.25)
    >>> abs(radial_derivative(p, PolarPoint(p.l_earth, 0.0))) < 1e-12
    True
    """
    _check_point(point)
    return float(radial_values(params.mu, point.r, point.theta))


@dataclass(frozen=True)
class CriticalAngle(object):
    theta: float
    kind: str  # 'min' or 'max'


@dataclass(frozen=True)
class MinimumReport(object):
    """
    Result of the scan of U_r over theta at a fixed radius.

    Attributes
    ----------
    r: float
        The radius.
    argmin: float
        Grid angle of the smallest U_r.
    critical: tuple of CriticalAngle
        All critical angles including 0 and pi.
    expected_interior: float or None
        arccos((2 r^2 - 1)/r) for r > 1/2.
    """
    r: float
    argmin: float
    critical: Tuple[CriticalAngle, ...]
    expected_interior: Optional[float]

    @property
    def minimum_at_zero(self) -> bool:
        return self.argmin == 0.0

    @property
    def interior(self) -> List[CriticalAngle]:
        return [a for a in self.critical if 0.0 < a.theta < np.pi]

    @property
    def ok(self) -> bool:
        interior = self.interior
        if self.expected_interior is None:
            structure = len(interior) == 0
        else:
            structure = len(interior) == 1 and interior[0].kind == 'max' \
                and abs(interior[0].theta - self.expected_interior) < 1e-8
        return self.minimum_at_zero and structure


def minimum_at_zero_check(params: ProblemParams, r: float,
                          theta_grid: Union[int, Sequence[float]] = 10000
                          ) -> MinimumReport:
    """
    Check that U_r attains its minimum over [0, pi] at theta = 0 and
    locate the critical angles.

    Besides 0 and pi, dU_r/dtheta vanishes where
    cos(theta) = (2 r^2 - 1)/r, which has a solution only for r > 1/2;
    it is a local maximum there.

    Parameters
    ----------
    params: ProblemParams
        The problem parameters.
    r: float
        The radius, 0 < r < 1.
    theta_grid: int or sequence of float
        The number of grid points on [0, pi], or the grid itself.
    """
    if not 0.0 < r < 1.0:
        raise DomainError("The radius must lie in (0, 1), got {}".format(r))

    if isinstance(theta_grid, int):
        thetas = np.linspace(0.0, np.pi, theta_grid)
    else:
        thetas = np.asarray(theta_grid, dtype=float)

    mu = params.mu
    values = radial_values(mu, r, thetas)
    argmin = float(thetas[int(np.argmin(values))])

    def slope(theta: float) -> float:
        return float(angular_values(mu, r, theta))

    # behaviour next to the ends, where sin(theta) vanishes
    near_zero = -2.0 * r * r + r + 1.0
    near_pi = -2.0 * r * r - r + 1.0
    critical = [CriticalAngle(0.0, 'min' if near_zero > 0.0 else 'max')]
    slopes = angular_values(mu, r, thetas)
    for t0, t1, s0, s1 in zip(thetas[1:-2], thetas[2:-1],
                              slopes[1:-2], slopes[2:-1]):
        if s0 * s1 < 0.0:
            root = optimize.brentq(slope, t0, t1, xtol=1e-14)
            critical.append(CriticalAngle(
                float(root), 'max' if s0 > 0.0 else 'min'))
    critical.append(CriticalAngle(np.pi, 'min' if near_pi < 0.0 else 'max'))

    expected = None
    if r > 0.5:
        expected = float(np.arccos((2.0 * r * r - 1.0) / r))

    return MinimumReport(
        r=float(r), argmin=argmin, critical=tuple(critical),
        expected_interior=expected)


def hill_boundary_radius(params: ProblemParams, c: float,
                         theta: float, scan_points: int = 2000) -> float:
    """
    Outer radius of the Earth Hill region along the ray theta:
    the first r at which V(r, theta) rises to c.
    """
    mu = params.mu
    rs = np.linspace(1e-9, 1.0 - 1e-9, scan_points)
    values = potential_values(mu, rs, theta) - c
    above = np.nonzero(values > 0.0)[0]
    if len(above) == 0:
        raise DomainError(
            "The ray theta={} does not leave the Hill region".format(theta))

    i = int(above[0])
    if i == 0:
        return float(rs[0])

    return float(optimize.brentq(
        lambda r: float(potential_values(mu, r, theta)) - c,
        rs[i - 1], rs[i], xtol=1e-14))


@dataclass(frozen=True)
class TransversalityReport(object):
    """
    Attributes
    ----------
    c: float
        The energy.
    samples: int
        Number of accepted Hill-region samples.
    min_value: float
        Minimum of r dV/dr over the samples.
    argmin: PolarPoint
        Where the minimum was found.
    max_radius: float
        Largest sampled radius.
    boundary_radius: float
        Largest outer radius of the Hill region over a ray scan.
    l_earth: float
        Distance from the Earth to the critical point.
    """
    c: float
    samples: int
    min_value: float
    argmin: PolarPoint
    max_radius: float
    boundary_radius: float
    l_earth: float
    notes: Tuple[str, ...] = field(default=())

    @property
    def transverse(self) -> bool:
        return self.min_value > 0.0

    @property
    def contained(self) -> bool:
        return self.max_radius < self.l_earth \
            and self.boundary_radius < self.l_earth

    @property
    def ok(self) -> bool:
        return self.transverse and self.contained


def transversality_audit(params: ProblemParams, c: float,
                         sample_count: int = 10000, seed: int = 0,
                         ray_count: int = 181) -> TransversalityReport:
    """
    Sample the Earth Hill region {V <= c, r < l_earth} by rejection and
    report the minimum of r dV/dr.

    The box r < l_earth selects the Earth component: V >= c_J on the
    circle r = l_earth.  Its containment in the box is checked
    independently along `ray_count` rays.

    Parameters
    ----------
    params: ProblemParams
        The problem parameters.
    c: float
        The energy, c < c_J.
    sample_count: int
        Number of accepted samples.
    seed: int
        Seed of the random stream.
    ray_count: int
        Number of rays of the containment check.
    """
    if not c < params.c_jacobi:
        raise DomainError(
            "The audit requires c < c_J={}, got {}".format(
                params.c_jacobi, c))

    mu = params.mu
    rng = np.random.default_rng(seed)
    radii: List[np.ndarray] = []
    angles: List[np.ndarray] = []
    accepted = 0
    batch = max(1024, sample_count)
    while accepted < sample_count:
        r = rng.uniform(0.0, params.l_earth, batch)
        theta = rng.uniform(0.0, np.pi, batch)
        mask = (r > 0.0) & (potential_values(mu, r, theta) <= c)
        radii.append(r[mask])
        angles.append(theta[mask])
        accepted += int(np.count_nonzero(mask))

    r = np.concatenate(radii)[:sample_count]
    theta = np.concatenate(angles)[:sample_count]
    values = r * radial_values(mu, r, theta)
    i = int(np.argmin(values))

    boundary = max(
        hill_boundary_radius(params, c, t)
        for t in np.linspace(0.0, np.pi, ray_count))

    report = TransversalityReport(
        c=float(c), samples=int(len(r)), min_value=float(values[i]),
        argmin=PolarPoint(float(r[i]), float(theta[i])),
        max_radius=float(np.max(r)), boundary_radius=float(boundary),
        l_earth=params.l_earth)
    logger.debug("transversality at c={}: min r dV/dr={:.6g}".format(
        c, report.min_value))
    if not report.ok:
        logger.warning("Transversality audit failed at c={}".format(c))

    return report
