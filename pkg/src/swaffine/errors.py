"""Exception hierarchy shared by all modules."""


class SwaffineError(Exception):
    """Base class for every error raised by this package."""


class InputError(SwaffineError, ValueError):
    """Malformed or dimensionally inconsistent input."""


class ConfigError(SwaffineError, ValueError):
    """Invalid configuration, including resource guards."""


class NumericError(SwaffineError, ArithmeticError):
    """A numerical routine failed to produce a trustworthy result."""


class SingularMatrixError(NumericError):
    """A linear system is singular to working tolerance."""


class DivergenceError(NumericError):
    """A simulated trajectory left the admissible region."""
