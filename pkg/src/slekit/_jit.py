"""Numba switch.

Every hot kernel exists twice: a compiled loop version (``_nb`` modules) and a
vectorised numpy version (``_np`` modules) that computes the same quantity.
``SLEKIT_DISABLE_NUMBA=1`` selects the numpy path; the flag is read once, at
import.  Without numba installed the numpy path is used unconditionally.
"""
import importlib
import os

_off = os.environ.get("SLEKIT_DISABLE_NUMBA", "0").strip().lower()
USE_NUMBA = _off not in ("1", "true", "yes", "on")

if USE_NUMBA:
    try:
        import numba  # noqa: F401
    except ImportError:  # pragma: no cover
        USE_NUMBA = False


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def kernels(package: str):
    """Return the ``_nb`` or ``_np`` kernel module of *package*."""
    name = "_nb" if USE_NUMBA else "_np"
    return importlib.import_module(f"{package}.{name}")
