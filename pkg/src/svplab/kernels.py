"""Kernel backend selection.

The compiled extension ``svplab._ckernels`` is used when it is importable;
otherwise the numpy implementations in ``svplab._pykernels`` are used. Set
``SVPLAB_BACKEND=python`` to force the fallback (``cython`` makes a missing
extension an ImportError instead of a silent fallback).
"""

from __future__ import annotations

import os

from svplab import _pykernels

_requested = os.environ.get("SVPLAB_BACKEND", "").strip().lower()

if _requested == "python":
    _impl = _pykernels
else:
    try:
        from svplab import _ckernels as _impl
    except ImportError:
        if _requested == "cython":
            raise
        _impl = _pykernels

KERNEL_NAMES = (
    "first_shortener",
    "all_shorteners",
    "first_shortened",
    "all_shortened",
    "first_within",
    "all_within",
    "first_closer",
    "all_closer",
    "first_close_pair",
    "all_close_pairs",
    "klein_coeffs",
    "enum_svp",
)

BACKEND: str = _impl.BACKEND

first_shortener = _impl.first_shortener
all_shorteners = _impl.all_shorteners
first_shortened = _impl.first_shortened
all_shortened = _impl.all_shortened
first_within = _impl.first_within
all_within = _impl.all_within
first_closer = _impl.first_closer
all_closer = _impl.all_closer
first_close_pair = _impl.first_close_pair
all_close_pairs = _impl.all_close_pairs
klein_coeffs = _impl.klein_coeffs
enum_svp = _impl.enum_svp


def available_backends() -> dict:
    """Map backend name to kernel module for every importable backend."""
    out = {"python": _pykernels}
    try:
        from svplab import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out


def set_backend(name: str) -> str:
    """Rebind every kernel to backend ``name``; returns the previous backend name.

    Solvers look kernels up through this module at call time, so the switch
    applies to them immediately.
    """
    global BACKEND
    backends = available_backends()
    if name not in backends:
        raise ImportError(f"kernel backend {name!r} is not available")
    impl = backends[name]
    previous = BACKEND
    g = globals()
    for k in KERNEL_NAMES:
        g[k] = getattr(impl, k)
    BACKEND = impl.BACKEND
    return previous
