"""
Exceptions raised by euler2c.
"""


class Euler2cError(Exception):
    """
    Base class of all errors raised by this package.
    """
    pass


class DomainError(Euler2cError, ValueError):
    """
    The arguments lie outside the domain of the operation,
    e.g. a mass ratio out of (0, 1/2], an energy outside the
    existence window of a critical orbit, or a Forbidden point.
    """
    pass


class DivergentIntegral(Euler2cError, ArithmeticError):
    """
    A complete elliptic integral was requested at m >= 1.

    This is a signal rather than a failure; the period functions
    translate it into an infinite period.
    """

    def __init__(self, m: float):
        super().__init__(
            "The complete elliptic integral diverges at m={:.17g}".format(m))
        self.m = m


class IntegrationError(Euler2cError, RuntimeError):
    """
    The numerical integration failed or drifted off the energy shell.
    """
    pass


class InsufficientData(Euler2cError, RuntimeError):
    """
    The trajectory is too short for the requested estimate.
    """
    pass
