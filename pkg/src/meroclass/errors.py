"""Exception hierarchy shared by all modules."""


class MeroclassError(Exception):
    """Base class for every error raised by this package."""


class ZeroConstantTerm(MeroclassError, ZeroDivisionError):
    """Series reciprocal requested for a series whose constant term vanishes."""


class InvalidOmega(MeroclassError, ValueError):
    """An omega specification is not a certified unit-bounded function."""


class DomainError(MeroclassError, ValueError):
    """A real parameter (lambda, p, theta, ...) lies outside its admissible range."""


class OrderExceeded(MeroclassError, IndexError):
    """A coefficient beyond the truncation order was requested."""


class BadNormalization(MeroclassError, ValueError):
    """Taylor data does not satisfy f(0) = 0, f'(0) = 1."""


class InsufficientOrder(MeroclassError, ValueError):
    """Truncation order is too low to give a meaningful verdict."""


class ZeroA2(MeroclassError, ValueError):
    """The fixed-point map is undefined because the second coefficient is zero."""


class NoConvergence(MeroclassError, RuntimeError):
    """Fixed-point iteration left the disk or ran out of iterations."""


class BoundaryZero(MeroclassError, RuntimeError):
    """The denominator is (numerically) zero on the counting circle."""


class RootCountMismatch(MeroclassError, RuntimeError):
    """Refined roots do not match the argument-principle count."""
