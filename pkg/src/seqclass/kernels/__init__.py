"""Solver kernel backends.

The compiled extension (built from _native.pyx) is used when importable;
otherwise the pure-Python module takes over. SEQCLASS_BACKEND=pure|native
forces a choice at import time. The native kernels are limited to 64 rows
and 64 columns; larger shapes silently route to the pure module.
"""

import os

from . import pure

try:
    from . import _native
except ImportError:
    _native = None

_forced = os.environ.get("SEQCLASS_BACKEND", "auto").strip().lower()
if _forced not in ("auto", "native", "pure"):
    raise RuntimeError(f"SEQCLASS_BACKEND must be auto, native or pure, got {_forced!r}")
if _forced == "native" and _native is None:
    raise RuntimeError("SEQCLASS_BACKEND=native but the compiled kernels are not built")

_active_name = "native" if (_native is not None and _forced != "pure") else "pure"

_NATIVE_MAX_BITS = 64


def backend_name() -> str:
    """Name of the backend the next solve will use ('native' or 'pure')."""
    return _active_name


def available_backends() -> tuple[str, ...]:
    return ("native", "pure") if _native is not None else ("pure",)


def use(name: str) -> str:
    """Force a backend globally; returns the previous name.

    Meant for tests and the backend-comparison benchmark.
    """
    global _active_name
    if name not in ("native", "pure"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "native" and _native is None:
        raise RuntimeError("compiled kernels are not built")
    previous = _active_name
    _active_name = name
    return previous


def get(n_rows: int | None = None, n_cols: int | None = None):
    """Kernel module to use for a problem of the given shape."""
    if _active_name == "native":
        if (n_rows or 0) <= _NATIVE_MAX_BITS and (n_cols or 0) <= _NATIVE_MAX_BITS:
            return _native
    return pure
