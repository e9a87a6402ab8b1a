"""Backend selection for the numeric kernels.

The compiled numba path is the default. Set ``ELICITKIT_BACKEND=numpy``
to force the pure-numpy path; it is also used automatically when numba
cannot be imported.
"""
import logging
import os

import numpy as np

from . import _kernels_np

log = logging.getLogger(__name__)

_REQUESTED = os.environ.get("ELICITKIT_BACKEND", "numba").strip().lower()
if _REQUESTED not in ("numba", "numpy"):
    raise ValueError(f"ELICITKIT_BACKEND must be 'numba' or 'numpy', got {_REQUESTED!r}")

try:
    from . import _kernels_nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    _kernels_nb = None
    if _REQUESTED == "numba":
        log.warning("numba unavailable, falling back to the numpy kernels")

BACKEND = "numba" if (_REQUESTED == "numba" and _kernels_nb is not None) else "numpy"


def backend_module(name=None):
    """Return the kernel module for ``name`` (default: the active backend)."""
    name = name or BACKEND
    if name == "numba":
        if _kernels_nb is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        return _kernels_nb
    if name == "numpy":
        return _kernels_np
    raise ValueError(f"unknown backend {name!r}")


_impl = backend_module()


def _f64(v):
    return np.ascontiguousarray(v, dtype=np.float64)


def betainc(a, b, x):
    """Regularized incomplete beta function, broadcast over its arguments."""
    a, b, x = np.broadcast_arrays(a, b, x)
    shape = x.shape
    out = _impl.betainc(_f64(a).ravel(), _f64(b).ravel(), _f64(x).ravel())
    return out.reshape(shape)


def betainc_scalar(a: float, b: float, x: float) -> float:
    return float(_impl.betainc_scalar(float(a), float(b), float(x)))


def window_payoffs(a: float, b: float, reports, delta: float) -> np.ndarray:
    return _impl.window_payoffs(float(a), float(b), _f64(reports), float(delta))


def window_masses(a, b, centers, delta: float) -> np.ndarray:
    return _impl.window_masses(_f64(a), _f64(b), _f64(centers), float(delta))


def opposite_flags(alpha, beta, x_hat: float, delta: float):
    return _impl.opposite_flags(_f64(alpha), _f64(beta), float(x_hat), float(delta))
