"""Hot numeric kernels with a jitted and a pure-numpy implementation.

The active backend is chosen once at import time from the TRACELAB_BACKEND
environment variable: "numba" (default when numba imports cleanly) or
"numpy".  Both backends expose the same functions over the same encoded
inputs; `load_backend` returns either one explicitly, which is what the
benchmark uses to compare them.
"""

import os
import warnings

from . import codes
from .codes import pack, STATUS_OK, STATUS_FLOOR

_ENV_VAR = "TRACELAB_BACKEND"


def load_backend(name: str):
    """Return the kernel module for an explicit backend name."""
    if name == "numpy":
        from . import _reference
        return _reference
    if name == "numba":
        from . import _accel
        return _accel
    raise ValueError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")


def _select():
    requested = os.environ.get(_ENV_VAR, "").strip().lower()
    if requested == "numpy":
        return load_backend("numpy")
    if requested == "numba":
        return load_backend("numba")
    if requested:
        raise ValueError(
            f"{_ENV_VAR}={requested!r} not understood; use 'numba' or 'numpy'")
    try:
        return load_backend("numba")
    except ImportError:  # pragma: no cover - depends on environment
        warnings.warn("numba unavailable; falling back to the numpy kernels")
        return load_backend("numpy")


backend = _select()
BACKEND_NAME = "numba" if backend.IS_ACCELERATED else "numpy"

eval_many = backend.eval_many
kraus_apply = backend.kraus_apply
herm_fn_apply = backend.herm_fn_apply
psd_power = backend.psd_power
joint_gaps = backend.joint_gaps
operator_midpoint_gaps = backend.operator_midpoint_gaps
jensen_gaps = backend.jensen_gaps
monotonicity_gaps = backend.monotonicity_gaps
remark_gaps = backend.remark_gaps
