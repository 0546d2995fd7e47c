"""Selects the sliding-window kernel implementation.

Two interchangeable backends exist: numba-jitted loops (fast, the default
whenever numba imports) and pure vectorized numpy. Set the environment
variable ``STACKMORPH_BACKEND`` to ``numpy`` or ``numba`` to force one;
``auto`` (the default) prefers numba and falls back to numpy silently.
``benchmarks/bench_backends.py`` compares the two.
"""

from __future__ import annotations

import os

from . import _kernels_numpy
from .errors import DomainError

_choice = os.environ.get("STACKMORPH_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise DomainError(
        f"STACKMORPH_BACKEND must be auto, numba, or numpy; got {_choice!r}"
    )

_impl = None
if _choice in ("auto", "numba"):
    try:
        from . import _kernels_numba as _impl
    except ImportError:
        if _choice == "numba":
            raise
        _impl = None
if _impl is None:
    _impl = _kernels_numpy

BACKEND_NAME: str = _impl.BACKEND_NAME
apply_set_kernel = _impl.apply_set_kernel
apply_stack_kernel = _impl.apply_stack_kernel
