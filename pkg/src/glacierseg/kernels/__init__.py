"""Hot-kernel dispatch.

The numerically heavy inner loops (patch unfolding for convolutions, 2x2
pooling, sliding-window morphology) exist twice: a numba-jitted version and a
pure-numpy fallback.  Selection order:

* ``GLACIERSEG_BACKEND=numpy`` forces the fallback,
* ``GLACIERSEG_BACKEND=numba`` requires numba (ImportError otherwise),
* unset or ``auto``: numba when importable, numpy otherwise.

``use_backend`` switches at runtime (used by the parity tests and the
benchmark in ``benchmarks/bench_backends.py``).
"""

import os

from . import numpy_backend

_BACKENDS = {"numpy": numpy_backend}

try:
    from . import numba_backend
    _BACKENDS["numba"] = numba_backend
except ImportError:
    numba_backend = None

_impl = None


def available_backends():
    return sorted(_BACKENDS)


def use_backend(name):
    """Select the kernel implementation by name ('numpy' or 'numba')."""
    global _impl
    if name not in _BACKENDS:
        raise ValueError(
            f"unknown backend {name!r}; available: {available_backends()}"
        )
    _impl = _BACKENDS[name]
    return _impl


def active_backend():
    return _impl.NAME


def _resolve_from_env():
    choice = os.environ.get("GLACIERSEG_BACKEND", "auto").lower()
    if choice in ("auto", ""):
        return "numba" if "numba" in _BACKENDS else "numpy"
    if choice not in _BACKENDS:
        raise ValueError(
            f"GLACIERSEG_BACKEND={choice!r} not available; "
            f"choose from {available_backends()}"
        )
    return choice


_impl = _BACKENDS[_resolve_from_env()]


def im2col(x, k, pad):
    return _impl.im2col(x, k, pad)


def col2im(cols, h, w, k, pad):
    return _impl.col2im(cols, h, w, k, pad)


def maxpool2(x):
    return _impl.maxpool2(x)


def maxpool2_backward(grad_out, arg):
    return _impl.maxpool2_backward(grad_out, arg)


def window_max(x, k, pad_value):
    return _impl.window_max(x, k, pad_value)


def window_max_backward(grad_out, arg, k):
    return _impl.window_max_backward(grad_out, arg, k)
