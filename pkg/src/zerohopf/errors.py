"""Exception hierarchy shared by the analysis and simulation modules.

The CLI maps these onto exit codes: configuration problems to 2,
degeneracy to 3, numerical failure to 4.
"""


class ZeroHopfError(Exception):
    """Base class for all package errors."""


class ConfigError(ZeroHopfError, ValueError):
    """Invalid or inconsistent configuration."""


class DegeneracyError(ZeroHopfError):
    """A nondegeneracy condition required by the unfolding fails."""


class NumericalError(ZeroHopfError):
    """Non-convergence, failed residual checks or blow-up."""
