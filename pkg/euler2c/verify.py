"""
Acceptance checks: every closed form against an independent oracle.

Each check returns a CheckResult with a pass flag and a few summary
numbers.  The report contains no timings, so that a fixed seed gives
identical output on every run.
"""
from dataclasses import dataclass, field
from logging import getLogger
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from euler2c import parallel_map
from euler2c.core import (
    Component, EnergyMomentum, OrbitKind, ProblemParams, Region, RegionTag,
    admissible_g_interval, classify, critical_constants)
from euler2c.contact import minimum_at_zero_check, transversality_audit
from euler2c.dynamics import (
    empirical_rotation, first_integral_drift, integrate, oscillation_periods,
    sample_state)
from euler2c.errors import Euler2cError
from euler2c.index import (
    COLLISION_KINDS, convexity_audit, cz_exterior, cz_interior,
    rs_index_of_collision_orbit)
from euler2c.periods import Axis, period_closed_form, period_oracle
from euler2c.rotation import (
    critical_energy_for_rotation, critical_rotation, exterior_bound_check,
    rotation_number, trace_torus_family, verify_monotonicity,
    verify_period_monotonicity)
from euler2c.special_functions import (
    complete_e, complete_k, complete_k_series)

logger = getLogger(__name__)

MU_VALUES = (0.1, 0.25, 0.5)
REGIONS = (Region.SPRIME, Region.S, Region.L, Region.P)


@dataclass(frozen=True)
class Level(object):
    """
    Grid sizes of the checks.
    """
    elliptic_points: int
    period_points: int
    boundary_points: int
    monotonicity_points: int
    bound_points: int
    sprime_energies: int
    sprime_points: int
    rs_energies: int
    rs_max_cover: int
    convexity_energies: int
    dynamics_points: int
    contact_radii: int
    contact_energies: int
    contact_samples: int
    family_step: float


LEVELS = {
    'quick': Level(
        elliptic_points=200, period_points=10, boundary_points=20,
        monotonicity_points=200, bound_points=200, sprime_energies=5,
        sprime_points=50, rs_energies=4, rs_max_cover=6,
        convexity_energies=4, dynamics_points=4, contact_radii=20,
        contact_energies=3, contact_samples=2000, family_step=0.05),
    'full': Level(
        elliptic_points=1000, period_points=200, boundary_points=100,
        monotonicity_points=1000, bound_points=1000, sprime_energies=20,
        sprime_points=200, rs_energies=20, rs_max_cover=10,
        convexity_energies=20, dynamics_points=20, contact_radii=100,
        contact_energies=10, contact_samples=10000, family_step=0.01),
}


@dataclass(frozen=True)
class CheckResult(object):
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class VerificationReport(object):
    level: str
    seed: int
    checks: Tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def as_dict(self) -> Dict[str, Any]:
        return {
            'level': self.level,
            'seed': self.seed,
            'passed': self.passed,
            'failures': self.failures,
            'checks': {
                check.name: dict(passed=check.passed, **check.details)
                for check in self.checks},
        }


def _relative_error(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


def _energy_range(params: ProblemParams,
                  region: Region) -> Tuple[float, float]:
    if region == Region.L:
        return (params.c_jacobi + 0.05, -0.05)
    if region == Region.P:
        return (params.c_e + 0.05, -0.05)
    if region == Region.S:
        return (-6.0, params.c_h - 0.05)

    return (-6.0, -0.05)


def random_points(params: ProblemParams, region: Region, count: int,
                  rng: np.random.Generator, inner: float = 0.02,
                  c_range: Optional[Tuple[float, float]] = None,
                  max_attempts: int = 1000) -> List[EnergyMomentum]:
    """
    Draw points of a regular region, keeping away from its boundary
    by the fraction `inner` of the admissible g-interval.
    """
    lo, hi = c_range or _energy_range(params, region)
    points = []
    attempts = 0
    while len(points) < count and attempts < max_attempts:
        attempts += 1
        c = float(rng.uniform(lo, hi))
        interval = admissible_g_interval(params, c, region)
        if interval is None:
            continue

        g_lo, g_hi = interval
        pad = inner * (g_hi - g_lo)
        g = float(rng.uniform(g_lo + pad, g_hi - pad))
        em = EnergyMomentum(params, g, c)
        if classify(em).region == region:
            points.append(em)

    return points


def check_elliptic(level: Level, rng: np.random.Generator) -> CheckResult:
    """
    AGM against the power series, K(0), and Legendre's relation.
    """
    ms = np.linspace(0.0, 0.9, level.elliptic_points)
    series_error = max(
        _relative_error(complete_k(m), complete_k_series(m)) for m in ms)
    k0_error = abs(complete_k(0.0) - np.pi / 2.0)

    legendre_error = 0.0
    for m in np.linspace(0.01, 0.99, level.elliptic_points):
        k, e = complete_k(m), complete_e(m)
        kp, ep = complete_k(1.0 - m), complete_e(1.0 - m)
        legendre_error = max(
            legendre_error, abs(e * kp + ep * k - k * kp - np.pi / 2.0))

    passed = series_error < 1e-12 \
        and k0_error <= 2.0 * np.finfo(float).eps \
        and legendre_error < 1e-12
    return CheckResult('elliptic', passed, {
        'series_error': series_error, 'k0_error': k0_error,
        'legendre_error': legendre_error})


def _period_errors(em: EnergyMomentum) -> List[float]:
    tag = classify(em)
    closed = period_closed_form(em, tag=tag)
    errors = []
    if tag.region == Region.S:
        components = (Component.EARTH, Component.MOON)
    else:
        components = (Component.EARTH,)

    errors.append(_relative_error(
        period_oracle(em, Axis.XI, Component.EARTH), closed.tau_xi))
    for component in components:
        errors.append(_relative_error(
            period_oracle(em, Axis.ETA, component), closed.tau_eta))

    return errors


def check_period_oracle(level: Level,
                        rng: np.random.Generator) -> CheckResult:
    """
    Closed-form periods against quadrature on random regular points,
    both eta-components in the S-region.
    """
    points = []
    counts = {}
    for mu in MU_VALUES:
        params = critical_constants(mu)
        for region in REGIONS:
            drawn = random_points(params, region, level.period_points, rng)
            counts['{}/{}'.format(mu, region.value)] = len(drawn)
            points.extend(drawn)

    errors = parallel_map(_period_errors, points)
    worst = max((max(e) for e in errors), default=np.inf)
    # the S'-region is empty for mu = 1/2
    missing = [key for key, n in counts.items()
               if n < level.period_points and key != '0.5/Sprime']
    passed = worst < 1e-8 and not missing
    return CheckResult('period_oracle', passed, {
        'points': len(points), 'max_relative_error': worst,
        'undersampled': missing})


def check_boundary_consistency(level: Level,
                               rng: np.random.Generator) -> CheckResult:
    """
    The eta-period formulas of adjacent regions agree on the curve l2
    (S' against S) and on the hyperbola gc = (1 - 2mu)^2 above c_h
    (the two branches of L).
    """
    worst_l2 = 0.0
    worst_hyperbola = 0.0
    for mu in MU_VALUES[:2]:
        params = critical_constants(mu)
        beta = params.beta
        for c in np.linspace(-6.0, params.c_h - 0.05,
                             level.boundary_points):
            g = -c - 2.0 * beta
            eps = 1e-12 * max(1.0, abs(g))
            above = period_closed_form(
                EnergyMomentum(params, g + eps, c), Component.EARTH,
                RegionTag(Region.SPRIME))
            below = period_closed_form(
                EnergyMomentum(params, g - eps, c), Component.EARTH,
                RegionTag(Region.S))
            worst_l2 = max(worst_l2, _relative_error(
                above.tau_eta, below.tau_eta))

        # the hyperbola lies in L for c_h < c < -1 + 2 sqrt(mu (1 - mu))
        upper = -1.0 + 2.0 * np.sqrt(mu * (1.0 - mu))
        margin = 0.02 * (upper - params.c_h)
        for c in np.linspace(params.c_h + margin, upper - margin,
                             level.boundary_points):
            g = beta * beta / c
            eps = 1e-12 * max(1.0, abs(g))
            tag = RegionTag(Region.L)
            above = period_closed_form(
                EnergyMomentum(params, g + eps, c), tag=tag)
            below = period_closed_form(
                EnergyMomentum(params, g - eps, c), tag=tag)
            worst_hyperbola = max(worst_hyperbola, _relative_error(
                above.tau_eta, below.tau_eta))

    passed = worst_l2 < 1e-10 and worst_hyperbola < 1e-10
    return CheckResult('boundary_consistency', passed, {
        'l2_error': worst_l2, 'hyperbola_error': worst_hyperbola})


def check_limits_monotonicity(level: Level,
                              rng: np.random.Generator) -> CheckResult:
    """
    Limits and monotonicity of the critical rotation functions,
    and the exact sentinels.
    """
    n = level.monotonicity_points
    failures = []
    violations = 0
    for mu in MU_VALUES:
        params = critical_constants(mu)
        limits = {
            'int': abs(critical_rotation(
                params, -1e6, OrbitKind.INTERIOR).value - 1.0) < 1e-3,
            'ell': abs(critical_rotation(
                params, -1e-6, OrbitKind.ELLIPTIC).value - 1.0) < 1e-3,
            'dou': critical_rotation(
                params, params.c_e - 1e-6, OrbitKind.DOUBLE).value < 1e-2,
        }
        failures.extend('{}/{}'.format(mu, key)
                        for key, ok in limits.items() if not ok)

        grids = {
            OrbitKind.INTERIOR: (-100.0, params.c_jacobi - 1e-6),
            OrbitKind.EXTERIOR_EARTH: (-100.0, -1e-3),
            OrbitKind.DOUBLE: (params.c_jacobi + 1e-6, params.c_e - 1e-6),
            OrbitKind.ELLIPTIC: (params.c_e + 1e-6, -1e-6),
        }
        if mu < 0.5:
            grids[OrbitKind.EXTERIOR_MOON] = (-100.0, params.c_h - 1e-3)

        for kind, (lo, hi) in grids.items():
            report = verify_monotonicity(
                params, kind, np.linspace(lo, hi, n))
            if not report.ok:
                failures.append('{}/{}'.format(mu, kind.value))
                violations += len(report.violations)

        middle = 0.5 * (params.c_jacobi + params.c_h)
        sentinels = [
            critical_rotation(params, middle, OrbitKind.HYPERBOLIC),
            critical_rotation(params, -0.5, OrbitKind.DOUBLE),
        ]
        expected = [np.inf, 0.0]
        if mu < 0.5:
            sentinels.append(critical_rotation(
                params, 0.5 * params.c_h, OrbitKind.EXTERIOR_MOON))
            expected.append(np.inf)
        for value, target in zip(sentinels, expected):
            if not (value.exact and value.value == target):
                failures.append('{}/sentinel'.format(mu))

    return CheckResult('limits_monotonicity', not failures, {
        'failed': failures, 'violations': violations})


def check_exterior_bound(level: Level,
                         rng: np.random.Generator) -> CheckResult:
    """
    R_ext < 2 below c_J, and R_ext^E < R_ext^M pointwise.
    """
    details = {}
    passed = True
    for mu in MU_VALUES:
        params = critical_constants(mu)
        grid = np.linspace(-1e3, params.c_jacobi - 1e-6, level.bound_points)
        bound = exterior_bound_check(params, grid)
        details[str(mu)] = {
            'maximum': bound.maximum, 'dominance': bound.dominance}
        passed = passed and bound.maximum < 2.0 and bound.dominance

    return CheckResult('exterior_bound', passed, details)


def check_sprime_monotonicity(level: Level,
                              rng: np.random.Generator) -> CheckResult:
    """
    R_c(g) strictly decreases across the S'-interval at mu = 1/4.
    """
    params = critical_constants(0.25)
    violations = 0
    for c in np.linspace(-10.0, params.c_jacobi - 0.05,
                         level.sprime_energies):
        lo, hi = admissible_g_interval(params, c, Region.SPRIME)
        pad = 1e-3 * (hi - lo)
        report = verify_monotonicity(
            params, Region.SPRIME,
            np.linspace(lo + pad, hi - pad, level.sprime_points),
            c=float(c), expected=-1)
        violations += len(report.violations)

    return CheckResult('sprime_monotonicity', violations == 0, {
        'energies': level.sprime_energies, 'violations': violations})


def _padded_grid(params: ProblemParams, c: float, region: Region,
                 points: int) -> Optional[np.ndarray]:
    interval = admissible_g_interval(params, c, region)
    if interval is None:
        return None

    lo, hi = interval
    pad = 1e-3 * (hi - lo)
    return np.linspace(lo + pad, hi - pad, points)


def _period_energies(params: ProblemParams) -> List[Tuple[Region, float]]:
    c_j = params.c_jacobi
    return [
        (Region.SPRIME, c_j - 0.5), (Region.SPRIME, c_j - 2.0),
        (Region.S, c_j - 0.5), (Region.S, c_j - 2.0),
        (Region.L, c_j + 0.3 * abs(c_j)),
        (Region.P, -0.5),
    ]


def check_period_monotonicity(level: Level,
                              rng: np.random.Generator) -> CheckResult:
    """
    tau_xi and tau_eta are monotone in g on every region, decreasing
    in S' and S, increasing in P, and of opposite directions in L.
    """
    failures = []
    cases = 0
    for mu in MU_VALUES:
        params = critical_constants(mu)
        for region, c in _period_energies(params):
            grid = _padded_grid(params, c, region, level.sprime_points)
            if grid is None:
                continue

            cases += 1
            xi, eta = verify_period_monotonicity(params, region, c, grid)
            if not (xi.ok and eta.ok):
                failures.append({
                    'mu': mu, 'c': c, 'region': region.value,
                    'tau_xi': len(xi.violations),
                    'tau_eta': len(eta.violations)})

    return CheckResult('period_monotonicity', not failures, {
        'cases': cases, 'failed': failures})


def check_s_monotonicity(level: Level,
                         rng: np.random.Generator) -> CheckResult:
    """
    R_c(g) has no critical point in the S-region below c_J: its
    differences keep one sign across the interval.
    """
    failures = []
    for mu in MU_VALUES:
        params = critical_constants(mu)
        for c in np.linspace(-10.0, params.c_jacobi - 0.05,
                             level.sprime_energies):
            grid = _padded_grid(params, float(c), Region.S,
                                level.sprime_points)
            if grid is None:
                continue

            report = verify_monotonicity(params, Region.S, grid, c=float(c))
            if report.fixed_sign is None:
                failures.append({'mu': mu, 'c': float(c)})

    return CheckResult('s_monotonicity', not failures, {
        'energies': level.sprime_energies, 'failed': failures})


def _formula_index(params: ProblemParams, c: float, kind: OrbitKind,
                   cover: int):
    if kind == OrbitKind.INTERIOR:
        return cz_interior(params, c, cover)

    component = Component.EARTH \
        if kind == OrbitKind.EXTERIOR_EARTH else Component.MOON
    return cz_exterior(params, c, cover, component)


def _rs_case(case: Tuple[float, float, OrbitKind, int]) -> Dict[str, Any]:
    mu, c, kind, cover = case
    params = critical_constants(mu)
    formula = _formula_index(params, c, kind, cover)
    if formula.degenerate:
        return {'skipped': True}

    numeric = rs_index_of_collision_orbit(params, c, kind, cover)
    result = {
        'skipped': False,
        'match': numeric.reliable and numeric.index == formula.index,
        'index': formula.index,
    }
    if cover == 2 and kind != OrbitKind.INTERIOR:
        result['match'] = result['match'] and formula.index == 3
    if cover == 2 and kind == OrbitKind.INTERIOR:
        k = int(np.ceil(2.0 * critical_rotation(params, c, kind).value))
        result['match'] = result['match'] and formula.index == 2 * k - 1

    return result


def _resonant(params: ProblemParams, c: float, max_cover: int) -> bool:
    for cover in range(2, max_cover + 1, 2):
        for kind in COLLISION_KINDS:
            value = critical_rotation(params, c, kind).value
            x = cover * value if kind == OrbitKind.INTERIOR \
                else cover / value
            if abs(x - round(x)) < 1e-6:
                return True

    return False


def check_robbin_salamon(level: Level,
                         rng: np.random.Generator) -> CheckResult:
    """
    Numerical crossing count of the linearized collision flows
    against the index formulas.
    """
    cases = []
    for mu in MU_VALUES:
        params = critical_constants(mu)
        for c in np.linspace(params.c_jacobi - 3.0, params.c_jacobi - 0.05,
                             level.rs_energies):
            if _resonant(params, float(c), level.rs_max_cover):
                continue
            for kind in COLLISION_KINDS:
                for cover in range(2, level.rs_max_cover + 1, 2):
                    cases.append((mu, float(c), kind, cover))

    results = [r for r in parallel_map(_rs_case, cases) if not r['skipped']]
    mismatches = sum(1 for r in results if not r['match'])
    return CheckResult('robbin_salamon', bool(results) and mismatches == 0, {
        'cases': len(results), 'mismatches': mismatches})


def check_convexity(level: Level, rng: np.random.Generator) -> CheckResult:
    """
    The minimum index over the evenly covered collision orbits is 3.
    """
    minima = {}
    for mu in MU_VALUES:
        params = critical_constants(mu)
        values = []
        for c in np.linspace(params.c_jacobi - 5.0, params.c_jacobi - 0.01,
                             level.convexity_energies):
            values.append(convexity_audit(params, float(c)).collision_min)
        minima[str(mu)] = sorted(set(values))

    passed = all(values == [3] for values in minima.values())
    return CheckResult('convexity', passed, {'minima': minima})


def _dynamics_case(em: EnergyMomentum) -> Dict[str, Any]:
    params, c = em.params, em.c
    tag = classify(em)
    closed = period_closed_form(em, Component.EARTH, tag)
    expected = rotation_number(em, tag).value
    state = sample_state(em, Component.EARTH)
    record = {'region': tag.region.value, 'g': em.g, 'c': c, 'mu': params.mu}
    try:
        traj = integrate(
            params, c, state, 11.0 * max(closed.tau_xi, closed.tau_eta))
        periods = oscillation_periods(traj)
        rotation = empirical_rotation(traj)
    except Euler2cError as e:
        record.update(passed=False, error=str(e))
        return record

    record.update(
        energy_drift=traj.energy_drift,
        integral_drift=first_integral_drift(traj),
        xi_period_error=_relative_error(periods.xi, closed.tau_xi),
        eta_period_error=_relative_error(periods.eta, closed.tau_eta),
        rotation_error=abs(rotation.value - expected))
    record['passed'] = bool(
        record['energy_drift'] <= 1e-9
        and record['integral_drift'] <= 1e-9
        and record['xi_period_error'] <= 1e-6
        and record['eta_period_error'] <= 1e-6
        and record['rotation_error'] <= 1e-3)
    return record


def check_dynamics(level: Level, rng: np.random.Generator) -> CheckResult:
    """
    Integrated trajectories against the conserved quantities,
    the closed-form periods and the rotation numbers.
    """
    points = []
    per_region = max(1, level.dynamics_points // len(REGIONS))
    for i, region in enumerate(REGIONS):
        # S' needs mu < 1/2
        mu = MU_VALUES[i % 2]
        params = critical_constants(mu)
        lo, hi = _energy_range(params, region)
        points.extend(random_points(
            params, region, per_region, rng, inner=0.2,
            c_range=(max(lo, -3.0), hi)))

    records = parallel_map(_dynamics_case, points)
    failed = [i for i, r in enumerate(records) if not r['passed']]
    worst = {
        key: max((r.get(key, np.inf) for r in records), default=np.inf)
        for key in ('energy_drift', 'integral_drift', 'xi_period_error',
                    'eta_period_error', 'rotation_error')}
    passed = len(points) >= level.dynamics_points and not failed
    return CheckResult('dynamics', passed, dict(
        points=len(points), failed=failed, **worst))


def check_contact(level: Level, rng: np.random.Generator) -> CheckResult:
    """
    U_r is minimal in the direction of the Moon, and the Liouville field
    is transverse to the Earth component below c_J.
    """
    argmin_failures = []
    audits = {}
    passed = True
    for mu in MU_VALUES:
        params = critical_constants(mu)
        for r in np.linspace(0.01, 0.99, level.contact_radii):
            if not minimum_at_zero_check(params, float(r)).minimum_at_zero:
                argmin_failures.append([mu, float(r)])

        seed = int(rng.integers(0, 2 ** 31))
        values = []
        for c in np.linspace(params.c_jacobi - 2.0, params.c_jacobi - 0.01,
                             level.contact_energies):
            report = transversality_audit(
                params, float(c), level.contact_samples, seed)
            values.append(report.min_value)
            passed = passed and report.ok
        audits[str(mu)] = {'min_value': min(values)}

    passed = passed and not argmin_failures
    return CheckResult('contact', passed, {
        'argmin_failures': argmin_failures, 'audits': audits})


def check_family(level: Level, rng: np.random.Generator) -> CheckResult:
    """
    The T_{3,2} family at mu = 1/2 ends on the interior collision orbit
    at R_int(c) = 3/2.
    """
    params = critical_constants(0.5)
    target = 1.5
    c_end = critical_energy_for_rotation(params, OrbitKind.INTERIOR, target)
    end_error = abs(
        critical_rotation(params, c_end, OrbitKind.INTERIOR).value - target)

    # the family lives in (c_end, c_J); anchor the grid at its top
    step = level.family_step
    c_max = params.c_jacobi - 1e-3
    c_min = c_max - step * np.ceil((c_max - c_end + 0.5) / step)
    curve = trace_torus_family(params, 3, 2, c_min, c_max, step)
    residual = max((
        abs(rotation_number(EnergyMomentum(params, s.g, s.c)).value - target)
        for s in curve.samples), default=np.inf)
    traced_end = curve.endpoints.get(OrbitKind.INTERIOR, np.nan)
    below = sum(1 for s in curve.samples if s.c < c_end - 1e-9)

    passed = end_error < 1e-8 and residual < 1e-10 and below == 0 \
        and abs(traced_end - c_end) < 1e-8
    return CheckResult('family', passed, {
        'endpoint': c_end, 'endpoint_error': end_error,
        'samples': len(curve.samples), 'below_endpoint': below,
        'max_residual': residual})


CHECKS: Sequence[Tuple[str, Callable[[Level, np.random.Generator],
                                     CheckResult]]] = (
    ('elliptic', check_elliptic),
    ('period_oracle', check_period_oracle),
    ('boundary_consistency', check_boundary_consistency),
    ('limits_monotonicity', check_limits_monotonicity),
    ('exterior_bound', check_exterior_bound),
    ('sprime_monotonicity', check_sprime_monotonicity),
    ('robbin_salamon', check_robbin_salamon),
    ('convexity', check_convexity),
    ('dynamics', check_dynamics),
    ('contact', check_contact),
    ('family', check_family),
    ('period_monotonicity', check_period_monotonicity),
    ('s_monotonicity', check_s_monotonicity),
)


def run_checks(level: str = 'quick', seed: int = 0,
               names: Optional[Sequence[str]] = None) -> VerificationReport:
    """
    Run the acceptance checks.

    Parameters
    ----------
    level: str
        'quick' (reduced grids) or 'full'.
    seed: int
        Seed of the random streams; each check draws from its own
        stream, so the selection of checks does not change the samples.
    names: list[str], optional
        Run only these checks.

    Return
    ------
    VerificationReport
        The results in a fixed order.
    """
    if level not in LEVELS:
        raise ValueError("Unknown level '{}'".format(level))

    sizes = LEVELS[level]
    results = []
    for i, (name, check) in enumerate(CHECKS):
        if names is not None and name not in names:
            continue

        logger.debug("Running check '{}'".format(name))
        rng = np.random.default_rng([seed, i])
        try:
            result = check(sizes, rng)
        except Euler2cError as e:
            logger.warning("Check '{}' raised {}".format(name, e))
            result = CheckResult(name, False, {'error': str(e)})

        if not result.passed:
            logger.warning("Check '{}' failed".format(name))
        results.append(result)

    return VerificationReport(level=level, seed=seed, checks=tuple(results))
