"""
Complete elliptic integrals.

The argument of every function is the parameter m = k**2.
K is evaluated by the arithmetic-geometric mean and, independently,
by its power series, so that the two can cross-validate each other.
"""
from logging import getLogger

import numpy as np

from euler2c import config
from euler2c.errors import DivergentIntegral, DomainError

logger = getLogger(__name__)


def _check_parameter(m: float, upper_inclusive: bool = False) -> float:
    m = float(m)
    if np.isnan(m) or m < 0.0:
        raise DomainError(
            "The elliptic parameter must be non-negative, got m={}".format(m))

    if m > 1.0 or (m == 1.0 and not upper_inclusive):
        raise DivergentIntegral(m)

    return m


def _agm(a: float, b: float):
    """
    Run the AGM iteration from (a, b).

    Return
    ------
    tuple(float, list[float])
        The common limit and the list of half-differences c_n
        for n >= 1.
    """
    cs = []
    for _ in range(64):
        if abs(a - b) <= config.agm_tol * a:
            break

        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        cs.append(c)

    return a, cs


def complete_k(m: float) -> float:
    """
    Complete elliptic integral of the first kind K(m).

    Parameters
    ----------
    m: float
        The parameter k**2, 0 <= m < 1.

    Return
    ------
    float
        The value of the integral of 1/sqrt(1 - m sin^2) over [0, pi/2].

    Examples
    --------
    >>> from euler2c.special_functions import complete_k
    >>> complete_k(0.0) == np.pi / 2
    True
    """
    m = _check_parameter(m)
    if m == 0.0:
        return np.pi / 2.0

    a, _ = _agm(1.0, np.sqrt(1.0 - m))
    return float(np.pi / (2.0 * a))


def complete_e(m: float) -> float:
    """
    Complete elliptic integral of the second kind E(m), 0 <= m <= 1.

    E(1) is finite and equal to 1.
    """
    m = _check_parameter(m, upper_inclusive=True)
    if m == 0.0:
        return np.pi / 2.0
    if m == 1.0:
        return 1.0

    a, cs = _agm(1.0, np.sqrt(1.0 - m))
    # E/K = 1 - sum_{n>=0} 2^(n-1) c_n^2 with c_0^2 = m
    total = 0.5 * m
    for n, c in enumerate(cs, start=1):
        total += 2.0 ** (n - 1) * c * c

    return float(np.pi / (2.0 * a) * (1.0 - total))


def complete_k_series(m: float, terms: int = None) -> float:
    """
    K(m) by the power series

        K = (pi/2) sum_n ((2n-1)!! / (2n)!!)^2 m^n

    summed for n = 0 .. terms.

    The coefficient ratios are generated by recurrence, and the
    summation stops early once a term is negligible.

    Parameters
    ----------
    m: float
        The parameter k**2, 0 <= m < 1.
    terms: int, optional
        The highest order of the partial sum.
        The default is config.series_terms.

    Examples
    --------
    >>> from euler2c.special_functions import complete_k_series
    >>> round(complete_k_series(0.25, terms=1) / (np.pi / 2), 12)
    1.0625
    """
    m = _check_parameter(m)
    if terms is None:
        terms = config.series_terms
    if terms < 0:
        raise DomainError("The number of terms must be positive.")

    coef = 1.0
    power = 1.0
    total = 1.0
    for n in range(1, terms + 1):
        ratio = (2.0 * n - 1.0) / (2.0 * n)
        coef *= ratio * ratio
        power *= m
        term = coef * power
        total += term
        if term < config.series_rel_tol * total:
            break

    return float(np.pi / 2.0 * total)


def dk_dm(m: float) -> float:
    """
    The derivative dK/dm.

    For m >= 0.1 the identity
    dK/dm = (E - (1 - m) K) / (2 m (1 - m)) is used;
    below that the term-wise differentiated series, which is free of
    the cancellation the identity suffers at small m.
    """
    m = _check_parameter(m)
    if m >= 0.1:
        return float(
            (complete_e(m) - (1.0 - m) * complete_k(m))
            / (2.0 * m * (1.0 - m)))

    coef = 1.0
    power = 1.0  # m^(n-1)
    total = 0.0
    for n in range(1, config.series_terms + 1):
        ratio = (2.0 * n - 1.0) / (2.0 * n)
        coef *= ratio * ratio
        term = n * coef * power
        total += term
        if term < config.series_rel_tol * total:
            break

        power *= m

    return float(np.pi / 2.0 * total)
