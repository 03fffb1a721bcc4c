"""Bessel functions of the orders the spectral equations need, and root bracketing."""

from src.special_functions.bessel import BesselOrder, bessel_j, bessel_pair
from src.special_functions.roots import EquationTag, RootList, find_roots

__all__ = ["BesselOrder", "EquationTag", "RootList", "bessel_j", "bessel_pair", "find_roots"]
