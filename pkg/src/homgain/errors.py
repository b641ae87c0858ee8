"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, AssumptionError -> 3,
NumericError -> 4.
"""


class ConfigError(ValueError):
    """Invalid argument, parameter file, or domain violation."""


class AssumptionError(RuntimeError):
    """The stabilizing gain-ratio condition or the storage scaling fails."""


class NumericError(RuntimeError):
    """A numeric procedure failed (no feasible gain, unstable system, overflow)."""
