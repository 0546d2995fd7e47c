"""Majority-vote estimation of a window operator from image pairs."""

from __future__ import annotations

import numpy as np

from .errors import DataError
from .lattice import MAX_TABLE_WINDOW, Window
from .operators import BorderPolicy, SetOperator, pattern_indices
from .threshold import BinaryImage


def train_majority(
    pairs: list[tuple[BinaryImage, BinaryImage]], window: Window
) -> SetOperator:
    """Fit a table by per-pattern majority vote over aligned image pairs.

    Patterns are gathered interior-only, so no border convention leaks into
    the estimate. A pattern's bit is 1 when strictly more than half of its
    target pixels are 1; ties and never-seen patterns give 0.
    """
    if window.size > MAX_TABLE_WINDOW:
        raise DataError(
            f"window has {window.size} offsets; tables are limited to "
            f"{MAX_TABLE_WINDOW}"
        )
    n = window.size
    size = 1 << n
    ones = np.zeros(size, dtype=np.int64)
    total = np.zeros(size, dtype=np.int64)

    dy = [p[0] for p in window.offsets]
    dx = [p[1] for p in window.offsets]
    top, bottom = max(0, -min(dy)), max(0, max(dy))
    left, right = max(0, -min(dx)), max(0, max(dx))

    for k, (src, tgt) in enumerate(pairs):
        if src.shape != tgt.shape:
            raise DataError(
                f"pair {k}: input shape {src.shape} differs from target "
                f"shape {tgt.shape}"
            )
        idx = pattern_indices(src, window, BorderPolicy.CROP_INTERIOR)
        h, w = src.shape
        inner = tgt.bits[top : h - bottom, left : w - right]
        flat_idx = idx.ravel()
        flat_tgt = inner.ravel()
        total += np.bincount(flat_idx, minlength=size)
        ones += np.bincount(flat_idx[flat_tgt == 1], minlength=size)

    table = (2 * ones > total).astype(np.uint8)
    return SetOperator(window, table)
