"""
Conley-Zehnder indices of the evenly covered collision orbits.

The indices follow from the rotation numbers by a counting formula.
The linearized flows along the collision orbits are known in closed
form, and a numerical Robbin-Salamon crossing counter applied to them
serves as an independent check of the formula.
"""
from dataclasses import dataclass, field
from logging import getLogger
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import optimize

from euler2c import config
from euler2c.core import (
    Component, EnergyMomentum, OrbitKind, ProblemParams, Region,
    admissible_g_interval, classify)
from euler2c.errors import DomainError
from euler2c.periods import critical_orbit_periods
from euler2c.rotation import critical_rotation, rotation_number

logger = getLogger(__name__)

Matrix = np.ndarray

# omega(v, w) = v^T OMEGA w for v = (q, p)
OMEGA = np.array([[0.0, -1.0], [1.0, 0.0]])

COLLISION_KINDS = (
    OrbitKind.INTERIOR, OrbitKind.EXTERIOR_EARTH, OrbitKind.EXTERIOR_MOON)


@dataclass(frozen=True)
class SymplecticPath(object):
    """
    A path of 2x2 symplectic matrices starting at the identity.

    Attributes
    ----------
    sampler: callable
        Maps the time to the matrix.
    period_hint: float
        Return time of the path to the identity, if periodic.
    derivative: callable, optional
        Maps the time to the derivative of the matrix.
        Central differences are used if omitted.
    """
    sampler: Callable[[float], Matrix]
    period_hint: float
    derivative: Optional[Callable[[float], Matrix]] = None

    def __call__(self, t: float) -> Matrix:
        return self.sampler(t)

    def velocity(self, t: float, h: float = 1e-7) -> Matrix:
        if self.derivative is not None:
            return self.derivative(t)

        return (self.sampler(t + h) - self.sampler(t - h)) / (2.0 * h)


@dataclass(frozen=True)
class IndexResult(object):
    """
    The Conley-Zehnder index, or the resonance that makes the orbit
    degenerate.

    Attributes
    ----------
    index: int or None
        The odd index of a nondegenerate orbit.
    resonance: float or None
        The value of 2N R_int (or 2N / R_ext), set for degenerate orbits.
    """
    index: Optional[int] = None
    resonance: Optional[float] = None

    @property
    def degenerate(self) -> bool:
        return self.index is None


@dataclass(frozen=True)
class CrossingRecord(object):
    time: float
    signature: int


@dataclass(frozen=True)
class RobbinSalamonResult(object):
    index: float
    crossings: Tuple[CrossingRecord, ...]
    reliable: bool = True


def _check_cover(cover2n: int) -> int:
    if int(cover2n) != cover2n or cover2n <= 0 or cover2n % 2 != 0:
        raise DomainError(
            "Only evenly covered collision orbits are contractible; "
            "got cover {}".format(cover2n))

    return int(cover2n)


def _check_below_jacobi(params: ProblemParams, c: float) -> None:
    if not c < params.c_jacobi:
        raise DomainError(
            "The collision orbits are treated below c_J={}, got c={}".format(
                params.c_jacobi, c))


def count_index(x: float) -> IndexResult:
    """
    1 + 2 max{k in Z : k < x}, or a degenerate result if x is an integer
    within config.delta_res.
    """
    nearest = round(x)
    if abs(x - nearest) < config.delta_res:
        return IndexResult(resonance=float(x))

    return IndexResult(index=1 + 2 * int(np.floor(x)))


def cz_interior(params: ProblemParams, c: float,
                cover2n: int) -> IndexResult:
    """
    Conley-Zehnder index of the 2N-fold covered interior collision orbit.

    The orbit is nondegenerate iff 2N R_int is not an integer.

    Examples
    --------
    >>> from euler2c.core import critical_constants
    >>> cz_interior(critical_constants(0.5), -3.0, 2).index
    5
    """
    cover2n = _check_cover(cover2n)
    _check_below_jacobi(params, c)
    rot = critical_rotation(params, c, OrbitKind.INTERIOR)
    if rot.is_infinite:
        raise DomainError("R_int diverges at c={}".format(c))

    return count_index(cover2n * rot.value)


def cz_exterior(params: ProblemParams, c: float, cover2n: int,
                component: Component = Component.EARTH) -> IndexResult:
    """
    Conley-Zehnder index of the 2N-fold covered exterior collision orbit
    of the Earth or the Moon component.

    Since 1 < R_ext < 2 below c_J, the doubly covered orbit always has
    index 3.
    """
    cover2n = _check_cover(cover2n)
    _check_below_jacobi(params, c)
    if component == Component.EARTH:
        kind = OrbitKind.EXTERIOR_EARTH
    elif component == Component.MOON:
        kind = OrbitKind.EXTERIOR_MOON
    else:
        raise DomainError("Choose the Earth or the Moon component.")

    rot = critical_rotation(params, c, kind)
    return count_index(cover2n / rot.value)


def _stiffness(params: ProblemParams, c: float, kind: OrbitKind) -> float:
    if kind == OrbitKind.INTERIOR:
        return -2.0 * (1.0 + c)
    if kind == OrbitKind.EXTERIOR_EARTH:
        return 2.0 * (params.beta - c)
    if kind == OrbitKind.EXTERIOR_MOON:
        return 2.0 * (-params.beta - c)

    raise DomainError(
        "No linearized flow for the {} orbit".format(kind.name.lower()))


def linearized_path(params: ProblemParams, c: float,
                    kind: OrbitKind) -> SymplecticPath:
    """
    Linearized flow transverse to a collision orbit.

    In the trivialization by d/d(lambda), d/d(p_lambda) (interior) or
    d/d(nu), d/d(p_nu) (exterior) the flow solves
    psi' = [[0, 4], [-kappa, 0]] psi with kappa = -2(1 + c) for the
    interior and kappa = 2(+-(1 - 2mu) - c) for the exterior orbits.
    """
    _check_below_jacobi(params, c)
    kappa = _stiffness(params, c, kind)
    omega = 2.0 * np.sqrt(kappa)
    generator = np.array([[0.0, 4.0], [-kappa, 0.0]])

    def sampler(t: float) -> Matrix:
        cs, sn = np.cos(omega * t), np.sin(omega * t)
        return np.array([[cs, 4.0 / omega * sn],
                         [-omega / 4.0 * sn, cs]])

    def derivative(t: float) -> Matrix:
        return generator @ sampler(t)

    return SymplecticPath(
        sampler=sampler, period_hint=float(np.pi / np.sqrt(kappa)),
        derivative=derivative)


def collision_total_time(params: ProblemParams, c: float, kind: OrbitKind,
                         cover2n: int) -> float:
    """
    Duration of the 2N-fold covered collision orbit in the regularized
    time.  The primitive period is 2 tau_eta for the interior orbit and
    2 tau_xi for the exterior ones.
    """
    periods = critical_orbit_periods(params, c, kind)
    if kind == OrbitKind.INTERIOR:
        return cover2n * 2.0 * periods.tau_eta

    return cover2n * 2.0 * periods.tau_xi


def _crossing_signature(path: SymplecticPath, t: float,
                        kernel_tol: float) -> Tuple[int, bool]:
    psi = path(t)
    _, sv, vh = np.linalg.svd(psi - np.eye(2))
    basis = vh[sv < kernel_tol * max(1.0, np.linalg.norm(psi))].T
    if basis.shape[1] == 0:
        return 0, False

    velocity = path.velocity(t)
    form = OMEGA @ velocity
    form = 0.5 * (form + form.T)
    restricted = basis.T @ form @ basis
    eig = np.linalg.eigvalsh(restricted)
    scale = max(1.0, np.max(np.abs(eig)))
    if np.any(np.abs(eig) < 1e-9 * scale):
        return int(np.sum(eig > 0) - np.sum(eig < 0)), False

    return int(np.sum(eig > 0) - np.sum(eig < 0)), True


def robbin_salamon_numeric(path: SymplecticPath, total_time: float,
                           scan_step: float,
                           det_tol: float = 1e-9
                           ) -> RobbinSalamonResult:
    """
    Robbin-Salamon index of a path of 2x2 symplectic matrices by
    counting crossings.

    Crossings are the zeros of d(t) = det(psi(t) - I).  Transversal
    zeros are found as sign changes of d, tangential ones (d >= 0 for
    elliptic paths) as local minima of d; both are refined by bisection
    to config.bisect_xtol and accepted if |d| < det_tol.  Each crossing
    contributes the signature of the crossing form
    Q_t(v, v) = omega(v, psi'(t) v) on ker(psi(t) - I), halved at the
    ends of the interval.

    Parameters
    ----------
    path: SymplecticPath
        The path, psi(0) = I.
    total_time: float
        The end of the interval, > 0.
    scan_step: float
        Spacing of the sign scan; must resolve consecutive crossings.
    det_tol: float
        Acceptance threshold of |det(psi - I)| at a refined crossing.

    Return
    ------
    RobbinSalamonResult
        The (half-integer) index, the crossings, and a reliability flag
        that is False if a crossing form was degenerate or the crossings
        were not isolated.
    """
    if not total_time > 0.0:
        raise DomainError("The total time must be positive.")
    if not scan_step > 0.0:
        raise DomainError("The scan step must be positive.")

    def d(t: float) -> float:
        return float(np.linalg.det(path(t) - np.eye(2)))

    def dd(t: float) -> float:
        # d/dt det(psi - I) = tr(adj(psi - I) psi')
        m = path(t) - np.eye(2)
        adj = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])
        return float(np.trace(adj @ path.velocity(t)))

    time_tol = 1e-10 * max(1.0, total_time)
    kernel_tol = 1e-6
    n = int(np.ceil(total_time / scan_step)) + 1
    ts = np.linspace(0.0, n * scan_step, n + 1)
    ds = np.array([d(t) for t in ts])
    slopes = np.array([dd(t) for t in ts])

    reliable = True
    if np.any((np.abs(ds[:-1]) < det_tol) & (np.abs(ds[1:]) < det_tol)):
        logger.warning("The crossings of the path are not isolated.")
        reliable = False

    candidates = []
    for i in range(len(ts) - 1):
        t0, t1 = ts[i], ts[i + 1]
        if ds[i] * ds[i + 1] < 0.0:
            candidates.append(optimize.bisect(
                d, t0, t1, xtol=config.bisect_xtol))
        elif slopes[i] < 0.0 < slopes[i + 1]:
            candidates.append(optimize.bisect(
                dd, t0, t1, xtol=config.bisect_xtol))
        elif ds[i + 1] == 0.0:
            candidates.append(t1)

    crossings = []
    total = 0.0
    signature, ok = _crossing_signature(path, 0.0, kernel_tol)
    reliable = reliable and ok
    crossings.append(CrossingRecord(0.0, signature))
    total += 0.5 * signature

    seen = [0.0]
    for t in sorted(candidates):
        if t <= time_tol or t > total_time + time_tol:
            continue
        if abs(d(t)) >= det_tol:
            continue
        if any(abs(t - s) <= time_tol for s in seen):
            continue

        seen.append(t)
        signature, ok = _crossing_signature(path, t, kernel_tol)
        if not ok:
            logger.warning(
                "Degenerate crossing form at t={:.17g}".format(t))
            reliable = False

        crossings.append(CrossingRecord(float(t), signature))
        if abs(t - total_time) <= time_tol:
            total += 0.5 * signature
        else:
            total += signature

    return RobbinSalamonResult(
        index=float(total), crossings=tuple(crossings), reliable=reliable)


def rs_index_of_collision_orbit(params: ProblemParams, c: float,
                                kind: OrbitKind, cover2n: int,
                                samples_per_period: int = 64
                                ) -> RobbinSalamonResult:
    """
    Numerical Robbin-Salamon index of the linearized flow along the
    2N-fold covered collision orbit.
    """
    cover2n = _check_cover(cover2n)
    path = linearized_path(params, c, kind)
    total = collision_total_time(params, c, kind, cover2n)
    return robbin_salamon_numeric(
        path, total, path.period_hint / samples_per_period)


@dataclass(frozen=True)
class ConvexityAudit(object):
    """
    Minimum Conley-Zehnder index over the contractible periodic orbits
    at an energy below c_J.

    Attributes
    ----------
    c: float
        The energy.
    collision_indices: dict
        (kind, cover) -> index for the nondegenerate collision orbits.
    degenerate: tuple
        (kind, cover, resonance) for the excluded resonant orbits.
    collision_min: int
        Minimum over the collision orbits.
    attained_by: tuple(OrbitKind, int)
        The orbit attaining the minimum.
    torus_rotations: tuple of float
        Rotation numbers of the sampled S'/S tori; all exceed 1.
    torus_bound: int or None
        Lower bound 5 for contractible torus orbits, valid if every
        sampled rotation number exceeds 1.  It relies on the Morse-Bott
        nondegeneracy of the torus families, so it is conditional.
    """
    c: float
    collision_indices: Dict[Tuple[OrbitKind, int], int]
    degenerate: Tuple[Tuple[OrbitKind, int, float], ...]
    collision_min: int
    attained_by: Tuple[OrbitKind, int]
    torus_rotations: Tuple[float, ...] = field(default=())
    torus_bound: Optional[int] = None
    torus_conditional: bool = True

    @property
    def minimum(self) -> int:
        if self.torus_bound is None:
            return self.collision_min

        return min(self.collision_min, self.torus_bound)

    @property
    def dynamically_convex(self) -> bool:
        return self.minimum >= 3


def _sample_torus_rotations(params: ProblemParams, c: float,
                            count: int) -> List[float]:
    values = []
    for region in (Region.SPRIME, Region.S):
        interval = admissible_g_interval(params, c, region)
        if interval is None or count <= 0:
            continue

        lo, hi = interval
        pad = 1e-6 * (hi - lo) + 10.0 * config.delta_curve
        for g in np.linspace(lo + pad, hi - pad, count):
            em = EnergyMomentum(params, float(g), c)
            tag = classify(em)
            if tag.region != region:
                continue
            values.append(rotation_number(em, tag).value)

    return values


def convexity_audit(params: ProblemParams, c: float,
                    torus_sample_count: int = 16,
                    max_cover: int = 20) -> ConvexityAudit:
    """
    Enumerate the Conley-Zehnder indices of the collision orbits with
    covers 2, 4, ..., max_cover and bound those of the torus orbits.
    """
    _check_below_jacobi(params, c)
    indices = {}
    degenerate = []
    for cover in range(2, max_cover + 1, 2):
        results = {
            OrbitKind.INTERIOR: cz_interior(params, c, cover),
            OrbitKind.EXTERIOR_EARTH: cz_exterior(
                params, c, cover, Component.EARTH),
            OrbitKind.EXTERIOR_MOON: cz_exterior(
                params, c, cover, Component.MOON),
        }
        for kind, result in results.items():
            if result.degenerate:
                degenerate.append((kind, cover, result.resonance))
            else:
                indices[(kind, cover)] = result.index

    attained_by = min(indices, key=lambda key: (indices[key], key[1]))
    rotations = _sample_torus_rotations(params, c, torus_sample_count)
    torus_bound = None
    if rotations and all(r > 1.0 for r in rotations):
        torus_bound = 5

    audit = ConvexityAudit(
        c=float(c), collision_indices=indices, degenerate=tuple(degenerate),
        collision_min=indices[attained_by], attained_by=attained_by,
        torus_rotations=tuple(rotations), torus_bound=torus_bound)
    logger.debug("convexity audit at c={}: min={} by {}".format(
        c, audit.minimum, attained_by))
    return audit
