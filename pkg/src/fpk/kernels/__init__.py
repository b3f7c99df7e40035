"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The backend is picked once at import time from the ``FPK_BACKEND``
environment variable: ``numba`` (default when importable), ``numpy``, or
``auto``. ``fpk bench`` compares the two.
"""

from __future__ import annotations

import os

from . import numpy_impl

KERNEL_NAMES = [
    "grad_faces_1d", "div_faces_1d", "laplacian_1d",
    "faces_centered_1d", "faces_upwind_1d",
    "grad_faces_2d", "div_faces_2d", "laplacian_2d",
    "faces_centered_2d", "faces_upwind_2d",
    "helmholtz_apply_1d", "helmholtz_apply_2d",
    "cg_helmholtz_1d", "cg_helmholtz_2d",
    "interp_1d", "interp_2d",
    "histogram_1d", "histogram_2d",
    "reflect_into_box",
]


def _resolve_backend() -> tuple[str, object]:
    want = os.environ.get("FPK_BACKEND", "auto").strip().lower()
    if want not in ("auto", "numba", "numpy"):
        raise ValueError(f"FPK_BACKEND must be auto|numba|numpy, got {want!r}")
    if want == "numpy":
        return "numpy", numpy_impl
    try:
        from . import numba_impl
        return "numba", numba_impl
    except ImportError:
        if want == "numba":
            raise
        return "numpy", numpy_impl


BACKEND, _impl = _resolve_backend()


def active_backend() -> str:
    return BACKEND


threads = os.environ.get("FPK_THREADS")
if threads and BACKEND == "numba":
    import numba

    numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))

for _name in KERNEL_NAMES:
    globals()[_name] = getattr(_impl, _name)

__all__ = KERNEL_NAMES + ["active_backend", "BACKEND", "KERNEL_NAMES"]
