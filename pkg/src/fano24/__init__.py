"""Exact verification of the K-stability computations for the (1,1,1,1) divisor in (P^1)^4."""

from .exactnum import Poly2, Rational, Region, integrate_region

__all__ = ["Poly2", "Rational", "Region", "integrate_region"]
__version__ = "0.1.0"
