"""Numerical radial and whole-plane SLE: Loewner engine, multi-point bound
kernels and a Monte Carlo harness for checking them."""
__version__ = "0.1.0"

from ._jit import backend  # noqa: E402

__all__ = ["__version__", "backend"]
