"""Stock morphological operators as window tables.

Composites are returned as stage lists (each stage its own window operator)
rather than flattened into one table over a larger window, so every stage
stays inspectable and the composition order is explicit.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .lattice import Window
from .operators import SetOperator

BUILTIN_NAMES = (
    "erosion",
    "dilation",
    "opening",
    "closing",
    "asf",
    "median",
    "boundary",
    "identity",
    "complement",
)

_NEEDS_ORIGIN = {"median", "boundary", "identity", "complement"}


def window_from_spec(spec: str) -> Window:
    """Build a centered window from an "RxC" size string, e.g. "3x3".

    Both dimensions must be odd so the window has a center, which becomes
    the origin offset (0,0).
    """
    parts = spec.lower().split("x")
    if len(parts) != 2:
        raise DomainError(f"window spec must look like '3x3', got {spec!r}")
    try:
        rows, cols = int(parts[0]), int(parts[1])
    except ValueError:
        raise DomainError(f"window spec must look like '3x3', got {spec!r}") from None
    if rows <= 0 or cols <= 0 or rows % 2 == 0 or cols % 2 == 0:
        raise DomainError(f"window dimensions must be odd and positive, got {spec!r}")
    ry, rx = rows // 2, cols // 2
    return Window(
        tuple((dy, dx) for dy in range(-ry, ry + 1) for dx in range(-rx, rx + 1))
    )


def _popcounts(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    counts = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        counts += (idx >> b) & 1
    return counts


def _primitive(name: str, window: Window) -> SetOperator:
    n = window.size
    full = (1 << n) - 1
    idx = np.arange(1 << n, dtype=np.int64)
    if name == "erosion":
        table = (idx == full).astype(np.uint8)
    elif name == "dilation":
        table = (idx != 0).astype(np.uint8)
    elif name == "median":
        table = (2 * _popcounts(n) > n).astype(np.uint8)
    elif name == "boundary":
        table = ((idx != 0) & (idx != full)).astype(np.uint8)
    elif name == "identity":
        table = ((idx >> window.origin_index) & 1).astype(np.uint8)
    elif name == "complement":
        table = (1 - ((idx >> window.origin_index) & 1)).astype(np.uint8)
    else:
        raise DomainError(f"unknown builtin operator {name!r}")
    return SetOperator(window, table)


def builtin(name: str, window: Window, asf_order: str = "oc") -> list[SetOperator]:
    """Return the named operator as a list of stages applied left to right.

    Primitives are one stage. opening = erosion then dilation, closing the
    reverse, asf one opening-closing round ("oc") or closing-opening ("co").
    """
    if name not in BUILTIN_NAMES:
        raise DomainError(
            f"unknown builtin operator {name!r}; choose from {', '.join(BUILTIN_NAMES)}"
        )
    if name in _NEEDS_ORIGIN and not window.origin_included:
        raise DomainError(f"{name} requires the window to contain the origin (0,0)")
    if name in ("erosion", "dilation", "median", "boundary", "identity", "complement"):
        return [_primitive(name, window)]
    ero = _primitive("erosion", window)
    dil = _primitive("dilation", window)
    if name == "opening":
        return [ero, dil]
    if name == "closing":
        return [dil, ero]
    # asf
    if asf_order == "oc":
        return [ero, dil, dil, ero]
    if asf_order == "co":
        return [dil, ero, ero, dil]
    raise DomainError(f"asf order must be 'oc' or 'co', got {asf_order!r}")
