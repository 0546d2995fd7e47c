"""Cross-sections, stacking checks, and level-sum reconstruction.

A grey image with top level m decomposes into m binary slices, one per
threshold t = 1..m; the slices decrease as t grows and summing them
recovers the image exactly. Both directions live here, together with the
image value types shared by the rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionError,
    DomainError,
    KindError,
    StackingViolationError,
)
from .lattice import BinaryPattern, GreyPattern


@dataclass(frozen=True, eq=False, init=False)
class GreyImage:
    """2-D grid of levels in 0..max_level. Pixels are a read-only array."""

    levels: np.ndarray
    max_level: int

    def __init__(self, levels, max_level: int):
        arr = np.array(levels, dtype=np.int32, copy=True)
        if arr.ndim != 2 or arr.size == 0:
            raise DimensionError("image must be a non-empty 2-D array")
        m = int(max_level)
        if m < 1:
            raise DomainError(f"max_level must be >= 1, got {m}")
        lo, hi = int(arr.min()), int(arr.max())
        if lo < 0 or hi > m:
            raise DomainError(f"pixel values span {lo}..{hi}, outside 0..{m}")
        arr.setflags(write=False)
        object.__setattr__(self, "levels", arr)
        object.__setattr__(self, "max_level", m)

    @property
    def height(self) -> int:
        return self.levels.shape[0]

    @property
    def width(self) -> int:
        return self.levels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.levels.shape

    def __eq__(self, other) -> bool:
        if not isinstance(other, GreyImage):
            return NotImplemented
        return self.max_level == other.max_level and np.array_equal(
            self.levels, other.levels
        )


@dataclass(frozen=True, eq=False, init=False)
class BinaryImage:
    """2-D grid of {0,1} values. Pixels are a read-only uint8 array."""

    bits: np.ndarray

    def __init__(self, bits):
        arr = np.array(bits, copy=True)
        if arr.ndim != 2 or arr.size == 0:
            raise DimensionError("image must be a non-empty 2-D array")
        if arr.dtype == bool:
            arr = arr.astype(np.uint8)
        else:
            arr = arr.astype(np.uint8, casting="unsafe")
            if not np.isin(np.asarray(bits), (0, 1)).all():
                raise DomainError("binary image values must be 0 or 1")
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.bits.shape

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)


def scale_binary(image: BinaryImage, max_level: int) -> GreyImage:
    """Embed a binary image as the grey image m*X."""
    if max_level < 1:
        raise DomainError(f"max_level must be >= 1, got {max_level}")
    return GreyImage(image.bits.astype(np.int32) * max_level, max_level)


def binary_from_grey(image: GreyImage) -> BinaryImage:
    """Read a {0, m}-valued grey image back as binary; KindError otherwise."""
    arr = image.levels
    if not np.isin(arr, (0, image.max_level)).all():
        raise KindError(
            f"image is not binary-valued: levels other than 0 and {image.max_level} present"
        )
    return BinaryImage(arr == image.max_level)


def cross_section(f: GreyImage | GreyPattern, t: int):
    """Binary slice {f >= t}; t must lie in 1..max_level."""
    t = int(t)
    if isinstance(f, GreyImage):
        if not 1 <= t <= f.max_level:
            raise DomainError(f"threshold {t} outside 1..{f.max_level}")
        return BinaryImage(f.levels >= t)
    if isinstance(f, GreyPattern):
        if not 1 <= t <= f.max_level:
            raise DomainError(f"threshold {t} outside 1..{f.max_level}")
        index = 0
        for i, v in enumerate(f.levels):
            if v >= t:
                index |= 1 << i
        return BinaryPattern(f.window, index)
    raise KindError(f"cannot take a cross-section of {type(f).__name__}")


def cross_sections(f: GreyImage | GreyPattern) -> list:
    """All slices for t = 1..max_level, in that order."""
    return [cross_section(f, t) for t in range(1, f.max_level + 1)]


def _check_slices(slices: Sequence[BinaryImage]) -> None:
    if not slices:
        raise DomainError("need at least one slice")
    shape = slices[0].shape
    for s in slices[1:]:
        if s.shape != shape:
            raise DimensionError(
                f"slice shapes differ: {shape} vs {s.shape}"
            )


def _first_violation(slices: Sequence[BinaryImage]):
    for t in range(len(slices) - 1):
        above = slices[t + 1].bits > slices[t].bits
        if above.any():
            y, x = np.argwhere(above)[0]
            return t + 2, (int(y), int(x))
    return None


def is_stacked(slices: Sequence[BinaryImage]) -> bool:
    """True when the slices decrease as the level grows."""
    _check_slices(slices)
    return _first_violation(slices) is None


def reconstruct(slices: Sequence[BinaryImage]) -> GreyImage:
    """Sum of the slices as a grey image with max_level = len(slices).

    The slices must be stacked (decreasing in t); the first offending
    (level, pixel) is reported otherwise.
    """
    _check_slices(slices)
    violation = _first_violation(slices)
    if violation is not None:
        level, pos = violation
        raise StackingViolationError(
            f"slices are not stacked: slice at level {level} exceeds "
            f"level {level - 1} at pixel {pos}",
            level=level,
            position=pos,
        )
    total = np.zeros(slices[0].shape, dtype=np.int32)
    for s in slices:
        total += s.bits
    return GreyImage(total, max_level=len(slices))
