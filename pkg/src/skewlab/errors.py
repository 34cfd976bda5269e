"""Exception types raised by skewlab."""


class SkewlabError(Exception):
    """Base class for all package errors."""


class NonConvergence(SkewlabError, ArithmeticError):
    """An iterative kernel (bisection, Jacobi sweeps, root finding) did not converge."""


class ZeroElement(SkewlabError, ValueError):
    """An operation undefined at the zero element was called with zero."""


class ConfigError(SkewlabError, ValueError):
    """Malformed gauge text or out-of-range run configuration."""
