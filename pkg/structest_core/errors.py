"""
Exception hierarchy for structest.

Configuration problems (bad parameters, infeasible thresholds, enumeration
caps) derive from ValueError; sampling failures derive from RuntimeError.
The CLI maps the first family to exit code 2 and everything else to 3.
"""


class StructestError(Exception):
    """Base class for all structest errors"""


class ConfigurationError(StructestError, ValueError):
    """Invalid parameters, grids or test configuration"""


class InfeasibleThresholdError(ConfigurationError):
    """The threshold rule has no solution for the given inputs"""


class EnumerationLimitError(ConfigurationError):
    """An exact enumeration was refused because the state space is too large"""


class GenerationError(StructestError, RuntimeError):
    """A randomized construction exhausted its retry budget"""
