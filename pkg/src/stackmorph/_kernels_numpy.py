"""Vectorized numpy implementations of the sliding-window engines.

Both engines receive a pre-padded plane and non-negative, pre-shifted
offsets, so ``out[y, x]`` reads ``padded[y + dys[i], x + dxs[i]]`` for each
window position i. The grey engine computes the per-patch level sum
directly: sort the patch once, then walk the (at most |W|+1) threshold
segments on which the cross-section pattern is constant.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"


def apply_set_kernel(padded, dys, dxs, table, out_h, out_w):
    idx = np.zeros((out_h, out_w), dtype=np.int64)
    for i in range(dys.shape[0]):
        plane = padded[dys[i] : dys[i] + out_h, dxs[i] : dxs[i] + out_w]
        idx |= (plane != 0).astype(np.int64) << i
    return table[idx]


def apply_stack_kernel(padded, dys, dxs, table, m, out_h, out_w):
    n = dys.shape[0]
    patch = np.empty((out_h, out_w, n), dtype=np.int32)
    for i in range(n):
        patch[:, :, i] = padded[dys[i] : dys[i] + out_h, dxs[i] : dxs[i] + out_w]

    # Descending patch values with the matching pattern bits.
    order = np.argsort(-patch, axis=2, kind="stable")
    vals = np.take_along_axis(patch, order, axis=2).astype(np.int64)
    bits = np.left_shift(np.int64(1), order.astype(np.int64))
    masks = np.bitwise_or.accumulate(bits, axis=2)
    hits = table[masks].astype(np.int64)

    # Segment t in (vals[0], m] sees the all-below pattern 0; segment
    # (vals[j+1], vals[j]] sees masks[j]; segment (0, vals[n-1]] sees the
    # full accumulated mask. Duplicate values yield zero-length segments.
    total = np.int64(table[0]) * (m - vals[..., 0])
    if n > 1:
        total = total + (hits[..., :-1] * (vals[..., :-1] - vals[..., 1:])).sum(axis=2)
    total = total + hits[..., -1] * vals[..., -1]
    return total.astype(np.int32)
