"""Exception hierarchy shared by all modules."""


class PigeomError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(PigeomError, ValueError):
    """Invalid ring or problem configuration (bad prime, tameness, shapes)."""


class PrecisionError(PigeomError, ArithmeticError):
    """Not enough absolute precision left to carry out an exact operation."""


class NotAUnitError(PigeomError, ZeroDivisionError):
    """Attempted to invert an element (or matrix) whose residue is not invertible."""


class NotDivisibleError(PigeomError, ArithmeticError):
    """Exact division by a power of the uniformizer is impossible."""


class HypothesisError(PigeomError, ValueError):
    """Inputs violate a hypothesis of a construction (e.g. A_i != B mod pi)."""


class DegenerateError(PigeomError, ValueError):
    """A curve, point or denominator is degenerate modulo p."""
