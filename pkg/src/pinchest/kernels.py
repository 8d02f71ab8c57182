"""Kernel backend selection.

The compiled extension is used when it imported cleanly, otherwise the numpy
fallback.  Set PINCHEST_KERNELS=numpy (or cython) before import, or call
``set_backend`` at runtime, to force one.  Both backends implement the same
functions and agree to floating-point accuracy, but not bit-exactly, so
reproducibility guarantees hold per backend.
"""

import os

from . import _kernels_np

try:
    from . import _kernels_c
except ImportError:
    _kernels_c = None

_BACKENDS = {"numpy": _kernels_np}
if _kernels_c is not None:
    _BACKENDS["cython"] = _kernels_c

_impl = None
_name = None


def available_backends():
    """Names of the importable backends."""
    return tuple(sorted(_BACKENDS))


def backend_name():
    """Name of the backend currently in use."""
    return _name


def set_backend(name):
    """Switch kernel backend; mainly for benchmarks and equivalence tests.

    Not safe to call while estimation is running in another thread.
    """
    global _impl, _name
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; have {available_backends()}")
    _impl = _BACKENDS[name]
    _name = name


def first_order_atoms(wavelength, positions, angles):
    return _impl.first_order_atoms(wavelength, positions, angles)


def second_order_atoms(wavelength, positions, angles, focus_distance):
    return _impl.second_order_atoms(wavelength, positions, angles, focus_distance)


def near_field_atoms(wavelength, positions, angle, distances):
    return _impl.near_field_atoms(wavelength, positions, angle, distances)


def correlation_scores(atom_rows, weights, residual):
    return _impl.correlation_scores(atom_rows, weights, residual)


_requested = os.environ.get("PINCHEST_KERNELS", "").strip().lower()
if _requested:
    set_backend(_requested)
else:
    set_backend("cython" if "cython" in _BACKENDS else "numpy")
