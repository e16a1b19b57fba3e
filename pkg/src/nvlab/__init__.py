"""Oscillatory-integral toolkit for a dispersive 2+1 evolution at fixed
negative energy: stationary-phase classification, scattering-data models,
linearized and full inverse-scattering reconstruction, and large-time
decay-rate verification.
"""

from .errors import (
    BudgetExceededError,
    ConfigurationError,
    ConvergenceError,
    DivergenceError,
    NumericalDomainError,
    NVError,
)

__version__ = "0.1.0"

__all__ = [
    "NVError",
    "ConfigurationError",
    "NumericalDomainError",
    "ConvergenceError",
    "DivergenceError",
    "BudgetExceededError",
    "__version__",
]
