"""Windows, patterns, intervals, and the partial orders underneath everything.

A window is a finite set of integer-plane offsets held in a fixed canonical
order (row-major by ``(dy, dx)``); position i of every pattern refers to
offset i. Binary patterns are packed into an integer index, bit i = position
i, so lookup tables, kernels, and serialized operators agree bit for bit.
Grey patterns keep an explicit tuple of levels plus the shared top level m.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import CapacityError, DimensionError, DomainError, KindError

#: Ceiling on pattern/interval enumerations; keeps everything desk-scale.
ENUMERATION_CAP = 10**7

#: Largest window allowed for lookup-table operators (table size 2^|W|).
MAX_TABLE_WINDOW = 25


@dataclass(frozen=True, init=False)
class Window:
    """Finite set of ``(dy, dx)`` offsets, stored sorted row-major.

    The sorted order is load-bearing: bit i of every pattern index and
    position i of every level tuple refer to ``offsets[i]``.
    """

    offsets: tuple[tuple[int, int], ...]

    def __init__(self, offsets: Iterable[tuple[int, int]]):
        pts = tuple(sorted((int(dy), int(dx)) for dy, dx in offsets))
        if not pts:
            raise DimensionError("window must contain at least one offset")
        if len(set(pts)) != len(pts):
            raise DimensionError("window offsets must be pairwise distinct")
        object.__setattr__(self, "offsets", pts)

    @property
    def size(self) -> int:
        return len(self.offsets)

    def __len__(self) -> int:
        return len(self.offsets)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.offsets)

    def __contains__(self, offset: tuple[int, int]) -> bool:
        return tuple(offset) in self.offsets

    @property
    def origin_included(self) -> bool:
        return (0, 0) in self.offsets

    @property
    def origin_index(self) -> int | None:
        """Position of the origin offset, or None when absent."""
        try:
            return self.offsets.index((0, 0))
        except ValueError:
            return None

    def index_of(self, offset: tuple[int, int]) -> int:
        try:
            return self.offsets.index(tuple(offset))
        except ValueError:
            raise DimensionError(f"offset {offset!r} not in window") from None


@dataclass(frozen=True)
class BinaryPattern:
    """A {0,1} assignment to a window's points, packed as bits of ``index``."""

    window: Window
    index: int

    def __post_init__(self):
        if not 0 <= self.index < (1 << self.window.size):
            raise DomainError(
                f"pattern index {self.index} out of range for |W|={self.window.size}"
            )

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.index >> i) & 1 for i in range(self.window.size))

    def value_at(self, position: int) -> int:
        if not 0 <= position < self.window.size:
            raise DimensionError(f"position {position} out of range")
        return (self.index >> position) & 1

    def __str__(self) -> str:
        # Numeral convention: position 0 is the rightmost character.
        return format(self.index, f"0{self.window.size}b")


@dataclass(frozen=True)
class GreyPattern:
    """Levels in 0..max_level assigned to a window's points, in window order."""

    window: Window
    levels: tuple[int, ...]
    max_level: int

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(v) for v in self.levels))
        if self.max_level < 1:
            raise DomainError(f"max_level must be >= 1, got {self.max_level}")
        if len(self.levels) != self.window.size:
            raise DimensionError(
                f"pattern has {len(self.levels)} levels for |W|={self.window.size}"
            )
        for v in self.levels:
            if not 0 <= v <= self.max_level:
                raise DomainError(f"level {v} outside 0..{self.max_level}")

    def value_at(self, position: int) -> int:
        if not 0 <= position < self.window.size:
            raise DimensionError(f"position {position} out of range")
        return self.levels[position]

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.levels) + ")"


Pattern = BinaryPattern | GreyPattern


def _check_same_space(a: Pattern, b: Pattern) -> None:
    if type(a) is not type(b):
        raise KindError(f"cannot mix {type(a).__name__} with {type(b).__name__}")
    if a.window != b.window:
        raise DimensionError("patterns live on different windows")
    if isinstance(a, GreyPattern) and a.max_level != b.max_level:
        raise DimensionError(
            f"patterns have different level ranges: {a.max_level} vs {b.max_level}"
        )


def leq(a: Pattern, b: Pattern) -> bool:
    """Point-wise partial order: a <= b at every window position."""
    _check_same_space(a, b)
    if isinstance(a, BinaryPattern):
        return a.index & ~b.index == 0
    return all(x <= y for x, y in zip(a.levels, b.levels))


@dataclass(frozen=True)
class PatternInterval:
    """Order interval [lower, upper]; empty when lower is not <= upper."""

    lower: Pattern
    upper: Pattern

    def __post_init__(self):
        _check_same_space(self.lower, self.upper)

    @property
    def window(self) -> Window:
        return self.lower.window

    @property
    def is_empty(self) -> bool:
        return not leq(self.lower, self.upper)

    @property
    def is_binary(self) -> bool:
        return isinstance(self.lower, BinaryPattern)

    def __str__(self) -> str:
        return f"[{self.lower}, {self.upper}]"


def interval_contains(interval: PatternInterval, p: Pattern) -> bool:
    """Membership p in [lower, upper]; always False for empty intervals."""
    if interval.is_empty:
        return False
    return leq(interval.lower, p) and leq(p, interval.upper)


def _interval_subset(inner: PatternInterval, outer: PatternInterval) -> bool:
    # Set semantics: the empty interval is contained in everything.
    if inner.is_empty:
        return True
    if outer.is_empty:
        return False
    return leq(outer.lower, inner.lower) and leq(inner.upper, outer.upper)


def _interval_sort_key(iv: PatternInterval):
    if iv.is_binary:
        return (iv.lower.index, iv.upper.index)
    return (iv.lower.levels, iv.upper.levels)


def maximal_elements(intervals: Iterable[PatternInterval]) -> tuple[PatternInterval, ...]:
    """Intervals not strictly contained (as sets) in another member.

    Duplicates collapse to one representative; output is sorted by
    (lower, upper). All inputs must share a window and kind.
    """
    items = list(dict.fromkeys(intervals))
    if not items:
        return ()
    first = items[0]
    for iv in items[1:]:
        if iv.is_binary != first.is_binary:
            raise KindError("cannot mix binary and grey intervals")
        if iv.window != first.window:
            raise DimensionError("intervals live on different windows")
    keep = []
    for iv in items:
        strictly_inside = any(
            other is not iv
            and _interval_subset(iv, other)
            and not _interval_subset(other, iv)
            for other in items
        )
        if not strictly_inside:
            keep.append(iv)
    return tuple(sorted(keep, key=_interval_sort_key))


def enumerate_binary_patterns(
    window: Window, cap: int = ENUMERATION_CAP
) -> Iterator[BinaryPattern]:
    """All 2^|W| binary patterns in index order."""
    count = 1 << window.size
    if count > cap:
        raise CapacityError(
            f"enumerating {count} binary patterns exceeds cap {cap}", required=count
        )

    def gen():
        for i in range(count):
            yield BinaryPattern(window, i)

    return gen()


def enumerate_grey_patterns(
    window: Window, max_level: int, cap: int = ENUMERATION_CAP
) -> Iterator[GreyPattern]:
    """All (m+1)^|W| grey patterns, position 0 varying fastest."""
    if max_level < 1:
        raise DomainError(f"max_level must be >= 1, got {max_level}")
    n = window.size
    count = (max_level + 1) ** n
    if count > cap:
        raise CapacityError(
            f"enumerating {count} grey patterns exceeds cap {cap}", required=count
        )

    def gen():
        base = max_level + 1
        for i in range(count):
            levels = []
            rest = i
            for _ in range(n):
                rest, digit = divmod(rest, base)
                levels.append(digit)
            yield GreyPattern(window, tuple(levels), max_level)

    return gen()
