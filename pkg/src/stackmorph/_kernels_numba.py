"""Numba-jitted implementations of the sliding-window engines.

Same contract as ``_kernels_numpy``; the grey engine sorts each patch in
place and walks the threshold segments, so the cost per pixel is
O(|W| log |W|) instead of O(m |W|).
"""

from __future__ import annotations

import numba
import numpy as np

BACKEND_NAME = "numba"


@numba.njit(cache=True)
def _set_loop(padded, dys, dxs, table, out):
    out_h, out_w = out.shape
    n = dys.shape[0]
    for y in range(out_h):
        for x in range(out_w):
            idx = 0
            for i in range(n):
                if padded[y + dys[i], x + dxs[i]] != 0:
                    idx |= 1 << i
            out[y, x] = table[idx]


@numba.njit(cache=True)
def _stack_loop(padded, dys, dxs, table, m, out):
    out_h, out_w = out.shape
    n = dys.shape[0]
    vals = np.empty(n, dtype=np.int64)
    bits = np.empty(n, dtype=np.int64)
    for y in range(out_h):
        for x in range(out_w):
            for i in range(n):
                vals[i] = padded[y + dys[i], x + dxs[i]]
                bits[i] = 1 << i
            # insertion sort, descending by value
            for i in range(1, n):
                v = vals[i]
                b = bits[i]
                j = i - 1
                while j >= 0 and vals[j] < v:
                    vals[j + 1] = vals[j]
                    bits[j + 1] = bits[j]
                    j -= 1
                vals[j + 1] = v
                bits[j + 1] = b
            total = 0
            mask = 0
            prev = m
            j = 0
            while prev > 0:
                while j < n and vals[j] >= prev:
                    mask |= bits[j]
                    j += 1
                nxt = vals[j] if j < n else 0
                total += table[mask] * (prev - nxt)
                prev = nxt
            out[y, x] = total


def apply_set_kernel(padded, dys, dxs, table, out_h, out_w):
    out = np.empty((out_h, out_w), dtype=np.uint8)
    _set_loop(padded, dys, dxs, table, out)
    return out


def apply_stack_kernel(padded, dys, dxs, table, m, out_h, out_w):
    out = np.empty((out_h, out_w), dtype=np.int32)
    _stack_loop(padded, dys, dxs, table, np.int64(m), out)
    return out
