"""Numerics for the Markov descriptions of open-KPZ stationary measures."""
from .config import BoundaryParams, KernelValue, QuadratureSpec
from .errors import AccuracyError, DomainError, KPZError, StatisticalQualityError

__version__ = "0.1.0"

__all__ = ["BoundaryParams", "KernelValue", "QuadratureSpec", "AccuracyError", "DomainError",
           "KPZError", "StatisticalQualityError", "__version__"]
