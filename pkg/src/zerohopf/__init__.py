"""Zero-Hopf analysis of a van der Pol oscillator with delayed feedback."""

from .analysis import Analysis, analyze
from .errors import ConfigError, DegeneracyError, NumericalError, ZeroHopfError
from .model import OscillatorConfig

__all__ = [
    "Analysis",
    "analyze",
    "OscillatorConfig",
    "ZeroHopfError",
    "ConfigError",
    "DegeneracyError",
    "NumericalError",
]

__version__ = "0.1.0"
