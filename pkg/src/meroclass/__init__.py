"""Numerical tools for a class of meromorphic functions with a pole-free radius."""

__version__ = "0.1.0"

from .classfn import ClassFunction, extremal, membership_check
from .omega import OmegaSpec
from .series import TaylorSeries

__all__ = ["ClassFunction", "OmegaSpec", "TaylorSeries", "extremal", "membership_check",
           "__version__"]
