"""Quantum measurement on the real plane: POVMs, integral quantization on the
circle and on SO(n), Toeplitz/Naimark checks, and joint measurability."""

from .errors import BudgetExceededError, DomainError, InfeasibleChoiceError, SingularQuantizerError
from .fourier import FourierFunction
from .plane import PolarState, SymMat2, density_from_polar

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "DomainError",
    "FourierFunction",
    "InfeasibleChoiceError",
    "PolarState",
    "SingularQuantizerError",
    "SymMat2",
    "density_from_polar",
]
