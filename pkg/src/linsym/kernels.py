"""Backend selection for the elimination kernel.

The compiled extension is used when it was built; otherwise the pure-Python
module provides the identical function.
"""
try:
    from ._kernels import rref_fraction_free
    BACKEND = "cython"
except ImportError:  # extension not built
    from ._kernels_py import rref_fraction_free
    BACKEND = "python"

__all__ = ["rref_fraction_free", "BACKEND"]
