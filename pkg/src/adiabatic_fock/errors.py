"""Exception hierarchy.

Every error carries the process exit code the CLI reports for it.
"""


class AdiabaticError(Exception):
    exit_code = 1


class ConfigError(AdiabaticError, ValueError):
    """Invalid input: a bad config value, shape mismatch or out-of-range argument."""

    exit_code = 2


class ZeroDimension(ConfigError):
    pass


class DimensionOverflow(ConfigError):
    pass


class ShiftUnsupported(ConfigError):
    pass


class LengthMismatch(ConfigError):
    pass


class VariableCountMismatch(ConfigError):
    pass


class DimMismatch(ConfigError):
    pass


class TimeOutOfRange(ConfigError):
    pass


class PolynomialSyntaxError(ConfigError):
    pass


class FixedDimension(ConfigError):
    pass


class NotHermitian(ConfigError):
    pass


class NumericalError(AdiabaticError, ArithmeticError):
    exit_code = 3


class ConvergenceFailure(NumericalError):
    pass


class NormDrift(NumericalError):
    pass


class Inconclusive(AdiabaticError):
    exit_code = 4


class DegenerateStart(Inconclusive):
    pass


class NoConvergence(Inconclusive):
    """The alpha search ran out of rounds; ``trace`` holds every round for diagnosis."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
