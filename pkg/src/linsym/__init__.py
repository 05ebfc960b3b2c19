"""Lie point symmetries of ẍ = Aẋ + Bx + C(t) with commuting constant A, B."""
from .kernels import BACKEND

__version__ = "0.1.0"
