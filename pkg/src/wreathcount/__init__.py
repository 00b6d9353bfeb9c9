"""Malle invariants of permutation groups and discriminant counts of quartic towers."""

__version__ = "0.1.0"

from .interval import ErrorInterval
from .kernels import BACKEND

__all__ = ["BACKEND", "ErrorInterval", "__version__"]
