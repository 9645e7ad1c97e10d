from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from logging import getLogger
from typing import Callable, Dict, Iterable, Iterator, List, Optional, TypeVar

import numpy as np

from euler2c import config
from euler2c.core import (
    Collision, Component, EnergyMomentum, OrbitKind, ProblemParams, Region,
    RegionTag, admissible_g_interval, classify, critical_constants,
    critical_curves, oscillation_ranges, quartic_roots)
from euler2c.errors import (
    DivergentIntegral, DomainError, Euler2cError, InsufficientData,
    IntegrationError)
from euler2c.periods import (
    Axis, PeriodPair, critical_orbit_kind, critical_orbit_periods, moduli,
    period_closed_form, period_oracle)
from euler2c.rotation import (
    RotationValue, critical_energy_for_rotation, critical_rotation,
    rotation_number, trace_torus_family, verify_monotonicity,
    verify_period_monotonicity)
from euler2c.index import (
    IndexResult, convexity_audit, cz_exterior, cz_interior,
    robbin_salamon_numeric)
from euler2c.dynamics import (
    PhaseState, empirical_rotation, integrate, sample_state)
from euler2c.contact import (
    PolarPoint, minimum_at_zero_check, radial_derivative,
    transversality_audit)
from euler2c.writer import RecordWriter, format_real

__version__ = '0.1.0'

__all__ = [
    'ProblemParams',
    'EnergyMomentum',
    'RegionTag',
    'Region',
    'Collision',
    'Component',
    'OrbitKind',
    'PeriodPair',
    'RotationValue',
    'IndexResult',
    'PhaseState',
    'PolarPoint',
    'RecordWriter',
    'Euler2cError',
    'DomainError',
    'DivergentIntegral',
    'IntegrationError',
    'InsufficientData',
    'critical_constants',
    'classify',
    'quartic_roots',
    'oscillation_ranges',
    'admissible_g_interval',
    'critical_curves',
    'moduli',
    'period_closed_form',
    'critical_orbit_periods',
    'period_oracle',
    'Axis',
    'rotation_number',
    'critical_rotation',
    'critical_energy_for_rotation',
    'verify_monotonicity',
    'verify_period_monotonicity',
    'trace_torus_family',
    'cz_interior',
    'cz_exterior',
    'robbin_salamon_numeric',
    'convexity_audit',
    'sample_state',
    'integrate',
    'empirical_rotation',
    'radial_derivative',
    'minimum_at_zero_check',
    'transversality_audit',
    'parallel_map',
    'ScanRecord',
    'scan_point',
    'scan',
]

logger = getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def parallel_map(func: Callable[[T], R], items: Iterable[T],
                 threads: Optional[int] = None) -> List[R]:
    """
    Apply func to every item and return the results in item order.

    Parameters
    ----------
    func: callable
        A pure function.
    items: iterable
        The arguments.
    threads: int, optional
        The number of worker threads, config.max_threads() by default.
        With one thread (or one item) the builtin map is used.
    """
    items = list(items)
    threads = threads or config.max_threads()
    threads = min(threads, len(items))
    if threads <= 1:
        return list(map(func, items))

    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))


@dataclass(frozen=True)
class ScanRecord(object):
    """
    One grid point of a region scan.

    Rotation numbers and periods are None where they are undefined
    (the Forbidden region, or a curve point outside the existence
    window of its critical orbit).
    """
    mu: float
    g: float
    c: float
    region: str
    rotation: Optional[RotationValue]
    tau_xi: Optional[float]
    tau_eta: Optional[float]

    def as_row(self) -> Dict[str, str]:
        rotation = ''
        if self.rotation is not None:
            rotation = format_real(self.rotation.value, self.rotation.exact)

        return {
            'mu': format_real(self.mu),
            'g': format_real(self.g),
            'c': format_real(self.c),
            'region': self.region,
            'rotation': rotation,
            'tau_xi': format_real(self.tau_xi),
            'tau_eta': format_real(self.tau_eta),
        }


def scan_point(em: EnergyMomentum) -> ScanRecord:
    """
    Classify a point and evaluate its rotation number and periods.
    """
    tag = classify(em)
    rotation = None
    periods = None
    try:
        if tag.region.is_regular:
            rotation = rotation_number(em, tag)
            periods = period_closed_form(em, tag=tag)
        elif tag.region.is_curve:
            kind = critical_orbit_kind(tag)
            rotation = critical_rotation(em.params, em.c, kind)
            periods = critical_orbit_periods(em.params, em.c, kind)
    except DomainError as e:
        logger.debug("({}, {}): {}".format(em.g, em.c, e))

    return ScanRecord(
        mu=em.params.mu, g=em.g, c=em.c, region=tag.name,
        rotation=rotation,
        tau_xi=periods.tau_xi if periods else None,
        tau_eta=periods.tau_eta if periods else None)


def _grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if lo == hi or steps <= 1:
        return np.array([float(lo)])

    return np.linspace(lo, hi, steps)


def scan(mu: float, c_min: float, c_max: float, c_steps: int,
         g_min: float, g_max: float, g_steps: int) -> Iterator[ScanRecord]:
    """
    Scan a rectangle of the energy-momentum plane.

    Parameters
    ----------
    mu: float
        The mass ratio, 0 < mu <= 1/2.
    c_min, c_max: float
        The energy range, c_min <= c_max < 0.
    c_steps: int
        Number of energies.
    g_min, g_max: float
        The range of the first integral, g_min <= g_max.
    g_steps: int
        Number of g values.

    Return
    ------
    Iterator[ScanRecord]
        One record per grid point, g-major: all energies of the first
        g value come first.
    """
    params = critical_constants(mu)
    if not c_min <= c_max < 0.0:
        raise DomainError(
            "The energy range must satisfy c_min <= c_max < 0, "
            "got [{}, {}]".format(c_min, c_max))
    if not g_min <= g_max:
        raise DomainError("Invalid g range [{}, {}]".format(g_min, g_max))

    energies = _grid(c_min, c_max, c_steps)
    for g in _grid(g_min, g_max, g_steps):
        row = [EnergyMomentum(params, float(g), float(c)) for c in energies]
        for record in parallel_map(scan_point, row):
            yield record
