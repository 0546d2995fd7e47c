"""Set operators as window lookup tables, and their grey level-sum extensions.

A set operator is translation invariant and locally defined by a window W:
the output bit at x depends only on the input patch seen through W at x, so
the operator is exactly a {0,1} table over the 2^|W| window patterns. Its
stack extension evaluates the table on every threshold cross-section of a
grey patch and outputs the number of hits, which keeps outputs within
0..max_level and never needs the division form.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import _backend
from .errors import (
    CapacityError,
    CompositionError,
    DimensionError,
    DomainError,
)
from .lattice import MAX_TABLE_WINDOW, BinaryPattern, GreyPattern, Window
from .threshold import BinaryImage, GreyImage


class BorderPolicy(str, Enum):
    """How patches that poke past the image frame are completed."""

    ZERO_PAD = "zero-pad"
    REPLICATE = "replicate"
    CROP_INTERIOR = "crop-interior"


DEFAULT_BORDER = BorderPolicy.ZERO_PAD


@dataclass(frozen=True, eq=False, init=False)
class SetOperator:
    """Binary image operator given by its characteristic lookup table.

    ``table[i]`` is the output bit for the window pattern with index i.
    """

    window: Window
    table: np.ndarray

    def __init__(self, window: Window, table):
        if window.size > MAX_TABLE_WINDOW:
            raise CapacityError(
                f"|W|={window.size} exceeds the lookup-table limit {MAX_TABLE_WINDOW}",
                required=1 << window.size,
            )
        arr = np.array(table, copy=True)
        expected = 1 << window.size
        if arr.ndim != 1 or arr.shape[0] != expected:
            raise DimensionError(
                f"table must have 2^|W| = {expected} entries, got shape {arr.shape}"
            )
        if not np.isin(arr, (0, 1)).all():
            raise DomainError("table entries must be 0 or 1")
        arr = arr.astype(np.uint8)
        arr.setflags(write=False)
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "table", arr)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetOperator):
            return NotImplemented
        return self.window == other.window and np.array_equal(self.table, other.table)


@dataclass(frozen=True)
class StackOperator:
    """Grey extension of a set operator for levels 0..max_level."""

    base: SetOperator
    max_level: int

    def __post_init__(self):
        if self.max_level < 1:
            raise DomainError(f"max_level must be >= 1, got {self.max_level}")

    @property
    def window(self) -> Window:
        return self.base.window


def eval_set(op: SetOperator, pattern: BinaryPattern) -> int:
    """Output bit of the operator on one window pattern."""
    if pattern.window != op.window:
        raise DimensionError("pattern window differs from operator window")
    return int(op.table[pattern.index])


def threshold_hit_sum(table: np.ndarray, levels: Sequence[int], m: int) -> int:
    """Sum over t = 1..m of table[cross-section index of levels at t].

    Walks the descending sorted levels once; between consecutive distinct
    values the cross-section pattern is constant, so each of the at most
    |W|+1 segments contributes table[pattern] * segment length.
    """
    pairs = sorted(((int(v), 1 << i) for i, v in enumerate(levels)), reverse=True)
    n = len(pairs)
    total = 0
    mask = 0
    prev = m
    j = 0
    while prev > 0:
        while j < n and pairs[j][0] >= prev:
            mask |= pairs[j][1]
            j += 1
        nxt = pairs[j][0] if j < n else 0
        total += int(table[mask]) * (prev - nxt)
        prev = nxt
    return total


def eval_stack(op: StackOperator, pattern: GreyPattern) -> int:
    """Output level of the stack extension on one grey window pattern."""
    if pattern.window != op.window:
        raise DimensionError("pattern window differs from operator window")
    if pattern.max_level != op.max_level:
        raise DomainError(
            f"pattern max_level {pattern.max_level} differs from operator {op.max_level}"
        )
    return threshold_hit_sum(op.base.table, pattern.levels, op.max_level)


def _frame(window: Window, shape: tuple[int, int], border: BorderPolicy):
    """Padding widths, shifted offsets, and output shape for one engine run."""
    h, w = shape
    dy = [p[0] for p in window.offsets]
    dx = [p[1] for p in window.offsets]
    top = max(0, -min(dy))
    bottom = max(0, max(dy))
    left = max(0, -min(dx))
    right = max(0, max(dx))
    if border is BorderPolicy.CROP_INTERIOR:
        out_h = h - top - bottom
        out_w = w - left - right
        if out_h < 1 or out_w < 1:
            raise DimensionError(
                f"window reach ({top}+{bottom}, {left}+{right}) leaves no "
                f"interior in a {h}x{w} image"
            )
        pad = None
    else:
        out_h, out_w = h, w
        pad = ((top, bottom), (left, right))
    dys = np.array([d + top for d in dy], dtype=np.int64)
    dxs = np.array([d + left for d in dx], dtype=np.int64)
    return pad, dys, dxs, out_h, out_w


def _padded_plane(arr: np.ndarray, pad, border: BorderPolicy) -> np.ndarray:
    if pad is None:
        return arr
    if border is BorderPolicy.ZERO_PAD:
        return np.pad(arr, pad, mode="constant", constant_values=0)
    return np.pad(arr, pad, mode="edge")


def apply_set(
    op: SetOperator, image: BinaryImage, border: BorderPolicy = DEFAULT_BORDER
) -> BinaryImage:
    """Slide the operator over a binary image."""
    border = BorderPolicy(border)
    pad, dys, dxs, out_h, out_w = _frame(op.window, image.shape, border)
    plane = _padded_plane(image.bits, pad, border)
    out = _backend.apply_set_kernel(plane, dys, dxs, op.table, out_h, out_w)
    return BinaryImage(out)


def apply_stack(
    op: StackOperator, image: GreyImage, border: BorderPolicy = DEFAULT_BORDER
) -> GreyImage:
    """Slide the stack extension over a grey image.

    Each output pixel is the per-patch level sum; no intermediate binary
    slices are materialized.
    """
    if image.max_level != op.max_level:
        raise DomainError(
            f"image max_level {image.max_level} differs from operator {op.max_level}"
        )
    border = BorderPolicy(border)
    pad, dys, dxs, out_h, out_w = _frame(op.window, image.shape, border)
    plane = _padded_plane(image.levels, pad, border)
    out = _backend.apply_stack_kernel(
        plane, dys, dxs, op.base.table, op.max_level, out_h, out_w
    )
    return GreyImage(out, op.max_level)


def pattern_indices(
    image: BinaryImage, window: Window, border: BorderPolicy = DEFAULT_BORDER
) -> np.ndarray:
    """Window pattern index seen at every output pixel (plumbing for training)."""
    border = BorderPolicy(border)
    pad, dys, dxs, out_h, out_w = _frame(window, image.shape, border)
    plane = _padded_plane(image.bits, pad, border)
    idx = np.zeros((out_h, out_w), dtype=np.int64)
    for i in range(dys.shape[0]):
        sub = plane[dys[i] : dys[i] + out_h, dxs[i] : dxs[i] + out_w]
        idx |= (sub != 0).astype(np.int64) << i
    return idx


def lipschitz_gap(
    op: StackOperator,
    f: GreyImage,
    g: GreyImage,
    border: BorderPolicy = DEFAULT_BORDER,
) -> tuple[int, int]:
    """(sup |op(f)-op(g)|, sum |f-g|) for two same-shape, same-range images."""
    if f.shape != g.shape:
        raise DimensionError(f"image shapes differ: {f.shape} vs {g.shape}")
    if f.max_level != g.max_level:
        raise DomainError(
            f"image level ranges differ: {f.max_level} vs {g.max_level}"
        )
    out_f = apply_stack(op, f, border)
    out_g = apply_stack(op, g, border)
    sup = int(np.abs(out_f.levels - out_g.levels).max())
    l1 = int(np.abs(f.levels.astype(np.int64) - g.levels.astype(np.int64)).sum())
    return sup, l1


def dual_operator(op: SetOperator) -> SetOperator:
    """Complement-conjugate: negate the output on the complemented pattern."""
    # Index of the complemented pattern is full ^ i, i.e. the reversed table.
    return SetOperator(op.window, 1 - op.table[::-1])


def compose(
    ops: Sequence[SetOperator | StackOperator],
    image: BinaryImage | GreyImage,
    border: BorderPolicy = DEFAULT_BORDER,
):
    """Apply a pipeline left to right; all stages must match the image kind."""
    if isinstance(image, BinaryImage):
        out = image
        for i, op in enumerate(ops):
            if not isinstance(op, SetOperator):
                raise CompositionError(
                    f"stage {i} is {type(op).__name__}, expected SetOperator "
                    "for a binary image"
                )
            out = apply_set(op, out, border)
        return out
    if isinstance(image, GreyImage):
        out = image
        for i, op in enumerate(ops):
            if not isinstance(op, StackOperator):
                raise CompositionError(
                    f"stage {i} is {type(op).__name__}, expected StackOperator "
                    "for a grey image"
                )
            if op.max_level != out.max_level:
                raise CompositionError(
                    f"stage {i} has max_level {op.max_level}, image has {out.max_level}"
                )
            out = apply_stack(op, out, border)
        return out
    raise CompositionError(f"cannot compose over {type(image).__name__}")
