import os

# Curve-equation residual below which a point is reported as lying on
# a critical curve.
delta_curve = 1e-9

# Distance to an integer below which 2N*R is treated as a resonance.
delta_res = 1e-9

# Squared moduli within this gap of 1 report an infinite period.
divergence_gap = 1e-13

# Elliptic integrals
agm_tol = 1e-16
series_terms = 256
series_rel_tol = 1e-17

# Root finding and quadrature
quad_epsrel = 1e-12
quad_limit = 200
bisect_xtol = 1e-12

# Regularized flow
drift_limit = 1e-9
shell_tol = 1e-9
ivp_rtol = 1e-13
ivp_atol = 1e-13

# Finite differences, relative to the interval length
fd_relative_step = 1e-5

# Output
schema_version = 1
float_format = '{:.17g}'


def max_threads() -> int:
    """
    Return the number of worker threads for grid computations.

    The environment variable EULER2C_THREADS caps the value;
    if it is missing or not a positive integer, the CPU count is used.
    """
    value = os.environ.get('EULER2C_THREADS')
    if value is not None:
        try:
            n = int(value)
            if n > 0:
                return n
        except ValueError:
            pass

    return os.cpu_count() or 1
