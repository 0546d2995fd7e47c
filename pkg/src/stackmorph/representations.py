"""Kernel and interval-basis views of operators, on both value kinds.

The kernel of a set operator is the collection of window patterns it maps
to 1; its basis is the antichain of maximal intervals inside the kernel.
The grey-side kernel is level-indexed and queried lazily through a counting
predicate (a grey patch belongs to level t exactly when at least t of its
cross-sections belong to the set kernel), so it is never materialized
unless an enumeration is explicitly requested.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import CapacityError, DimensionError, DomainError, KindError
from .lattice import (
    ENUMERATION_CAP,
    BinaryPattern,
    GreyPattern,
    PatternInterval,
    Window,
    _interval_subset,
    enumerate_grey_patterns,
    maximal_elements,
)
from .operators import SetOperator, StackOperator, threshold_hit_sum

#: Largest window for basis extraction; the search is enumeration-bounded.
MAX_BASIS_WINDOW = 12


@dataclass(frozen=True)
class SetKernel:
    """The set of window patterns a characteristic function maps to 1."""

    window: Window
    members: frozenset[int]

    def __post_init__(self):
        limit = 1 << self.window.size
        for i in self.members:
            if not 0 <= i < limit:
                raise DomainError(f"kernel member {i} out of range for |W|={self.window.size}")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, pattern) -> bool:
        if isinstance(pattern, BinaryPattern):
            if pattern.window != self.window:
                raise DimensionError("pattern window differs from kernel window")
            return pattern.index in self.members
        return int(pattern) in self.members

    def patterns(self) -> Iterator[BinaryPattern]:
        for i in sorted(self.members):
            yield BinaryPattern(self.window, i)


def kernel_of(op: SetOperator) -> SetKernel:
    """Patterns the operator maps to 1."""
    members = frozenset(int(i) for i in np.flatnonzero(op.table))
    return SetKernel(op.window, members)


def operator_from_kernel(kernel: SetKernel) -> SetOperator:
    table = np.zeros(1 << kernel.window.size, dtype=np.uint8)
    if kernel.members:
        table[sorted(kernel.members)] = 1
    return SetOperator(kernel.window, table)


@dataclass(frozen=True)
class StackKernelView:
    """Level-indexed grey kernel, queried through a membership predicate."""

    base: SetOperator
    max_level: int

    def __post_init__(self):
        if self.max_level < 1:
            raise DomainError(f"max_level must be >= 1, got {self.max_level}")

    @property
    def window(self) -> Window:
        return self.base.window


def stack_kernel_member(view: StackKernelView, f: GreyPattern, t: int) -> bool:
    """Does f belong to the grey kernel at level t?

    Counts the cross-sections of f that land in the set kernel; membership
    at level t means the count reaches t.
    """
    if f.window != view.window:
        raise DimensionError("pattern window differs from kernel window")
    if f.max_level != view.max_level:
        raise DomainError(
            f"pattern max_level {f.max_level} differs from view {view.max_level}"
        )
    if not 1 <= t <= view.max_level:
        raise DomainError(f"level {t} outside 1..{view.max_level}")
    return threshold_hit_sum(view.base.table, f.levels, view.max_level) >= t


def h_inverse(view: StackKernelView) -> SetKernel:
    """Recover the set kernel: patterns X whose embedding m*X sits at level m."""
    m = view.max_level
    w = view.window
    members = set()
    for i in range(1 << w.size):
        levels = tuple(m if (i >> k) & 1 else 0 for k in range(w.size))
        if stack_kernel_member(view, GreyPattern(w, levels, m), m):
            members.add(i)
    return SetKernel(w, frozenset(members))


@dataclass(frozen=True, init=False)
class IntervalBasis:
    """Antichain of maximal intervals, sorted by (lower, upper).

    ``kind`` is "binary" or "grey"; it must be given explicitly when the
    basis is empty (the empty basis generates the constant-0 operator).
    """

    window: Window
    intervals: tuple[PatternInterval, ...]
    kind: str

    def __init__(self, window: Window, intervals: Sequence[PatternInterval], kind: str | None = None):
        ivs = tuple(sorted(dict.fromkeys(intervals), key=_basis_sort_key))
        if ivs:
            inferred = "binary" if ivs[0].is_binary else "grey"
            if kind is not None and kind != inferred:
                raise KindError(f"kind {kind!r} does not match {inferred} intervals")
            kind = inferred
        elif kind is None:
            kind = "binary"
        if kind not in ("binary", "grey"):
            raise KindError(f"kind must be binary or grey, got {kind!r}")
        for iv in ivs:
            if iv.window != window:
                raise DimensionError("interval window differs from basis window")
            if iv.is_binary != (kind == "binary"):
                raise KindError("cannot mix binary and grey intervals in one basis")
            if iv.is_empty:
                raise DomainError(f"basis interval {iv} is empty")
        for i, a in enumerate(ivs):
            for b in ivs[i + 1 :]:
                if _subset(a, b) or _subset(b, a):
                    raise DomainError(f"basis is not an antichain: {a} vs {b}")
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "kind", kind)

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[PatternInterval]:
        return iter(self.intervals)


def _basis_sort_key(iv: PatternInterval):
    if iv.is_binary:
        return (iv.lower.index, iv.upper.index)
    return (iv.lower.levels, iv.upper.levels)


def _subset(inner: PatternInterval, outer: PatternInterval) -> bool:
    return _interval_subset(inner, outer)


def basis_leq(a: IntervalBasis, b: IntervalBasis) -> bool:
    """Every interval of a fits inside some interval of b."""
    if a.window != b.window or a.kind != b.kind:
        raise DimensionError("bases live on different spaces")
    return all(any(_subset(iv, other) for other in b.intervals) for iv in a.intervals)


def _bits_of(mask: int) -> Iterator[int]:
    while mask:
        bit = mask & -mask
        yield bit
        mask ^= bit


def basis_of(kernel: SetKernel) -> IntervalBasis:
    """Maximal intervals contained in the kernel.

    Breadth-first expansion: seed a singleton interval at every kernel
    member, repeatedly widen an interval by clearing one lower bit or
    raising one upper bit while staying inside the kernel. Intervals that
    admit no widening are exactly the maximal ones. Interval-in-kernel
    queries split on one free bit and memoize, so the whole search is
    bounded by the number of sub-intervals of the kernel.
    """
    n = kernel.window.size
    if n > MAX_BASIS_WINDOW:
        raise CapacityError(
            f"basis extraction needs |W| <= {MAX_BASIS_WINDOW}, got {n}",
            required=3**n,
        )
    table = operator_from_kernel(kernel).table
    full = (1 << n) - 1
    memo: dict[tuple[int, int], bool] = {}

    def inside(lo: int, hi: int) -> bool:
        free = hi & ~lo
        if free == 0:
            return bool(table[lo])
        key = (lo, hi)
        cached = memo.get(key)
        if cached is None:
            e = free & -free
            cached = inside(lo, hi ^ e) and inside(lo | e, hi)
            memo[key] = cached
        return cached

    seeds = sorted(kernel.members)
    queue = deque((x, x) for x in seeds)
    visited = set(queue)
    maxima = set()
    while queue:
        lo, hi = queue.popleft()
        can_grow = False
        for e in _bits_of(full & ~hi):
            if inside(lo | e, hi | e):
                can_grow = True
                cand = (lo, hi | e)
                if cand not in visited:
                    visited.add(cand)
                    queue.append(cand)
        for e in _bits_of(lo):
            if inside(lo ^ e, hi ^ e):
                can_grow = True
                cand = (lo ^ e, hi)
                if cand not in visited:
                    visited.add(cand)
                    queue.append(cand)
        if not can_grow:
            maxima.add((lo, hi))
    w = kernel.window
    intervals = [
        PatternInterval(BinaryPattern(w, lo), BinaryPattern(w, hi))
        for lo, hi in sorted(maxima)
    ]
    return IntervalBasis(w, maximal_elements(intervals), kind="binary")


def operator_from_basis(basis: IntervalBasis) -> SetOperator:
    """Union of the intervals, back as a lookup table."""
    if basis.kind != "binary":
        raise KindError("only binary bases convert to set operators")
    n = basis.window.size
    table = np.zeros(1 << n, dtype=np.uint8)
    for iv in basis.intervals:
        lo, hi = iv.lower.index, iv.upper.index
        free = hi & ~lo
        sub = free
        while True:
            table[lo | sub] = 1
            if sub == 0:
                break
            sub = (sub - 1) & free
    return SetOperator(basis.window, table)


def _closed_form_level(iv: PatternInterval, m: int, t: int) -> PatternInterval:
    """Level-t grey box generated by one binary interval [X, Y].

    Lower bound raises each point of X to t; upper bound allows t at the
    points of Y and m-t everywhere else, i.e. t*Y + (m-t) at every point.
    """
    w = iv.lower.window
    n = w.size
    xlo, yhi = iv.lower.index, iv.upper.index
    lo = tuple(t if (xlo >> i) & 1 else 0 for i in range(n))
    hi = tuple((t if (yhi >> i) & 1 else 0) + (m - t) for i in range(n))
    return PatternInterval(GreyPattern(w, lo, m), GreyPattern(w, hi, m))


def _closed_form_exact(iv: PatternInterval, window_size: int) -> bool:
    # The box [tX, tY+(m-t)W] equals the level set only when the count of
    # in-interval cross-sections has a one-sided formula: X empty gives
    # m - max(f off Y), Y full gives min(f on X). With X nonempty and Y
    # proper the count is their truncated difference and the level set is
    # not a box, so the box over-covers and the general path must run.
    full = (1 << window_size) - 1
    return iv.lower.index == 0 or iv.upper.index == full


def _grey_subset_inside(member: dict, lo: tuple, hi: tuple, memo: dict) -> bool:
    # Is every grey pattern in [lo, hi] a member? Bisects the first
    # coordinate with extent, so recursion depth stays logarithmic in m.
    if lo == hi:
        return member[lo]
    key = (lo, hi)
    cached = memo.get(key)
    if cached is not None:
        return cached
    for i, (a, b) in enumerate(zip(lo, hi)):
        if a < b:
            mid = (a + b) // 2
            left_hi = hi[:i] + (mid,) + hi[i + 1 :]
            right_lo = lo[:i] + (mid + 1,) + lo[i + 1 :]
            res = _grey_subset_inside(member, lo, left_hi, memo) and _grey_subset_inside(
                member, right_lo, hi, memo
            )
            memo[key] = res
            return res
    raise AssertionError("unreachable: lo != hi with no extent")


def stack_basis_level(
    basis: IntervalBasis, m: int, t: int, cap: int = ENUMERATION_CAP
) -> IntervalBasis:
    """Maximal grey intervals of the level-t kernel of the stack extension.

    Erosion-shaped ([X, full]) and anti-dilation-shaped ([empty, Y])
    single-interval bases have an exact closed form. Every other level set
    is materialized by enumeration (capped) and its maximal intervals are
    the maximal elements over all member-endpoint intervals inside it.
    """
    if basis.kind != "binary":
        raise KindError("stack_basis_level starts from a binary basis")
    if m < 1:
        raise DomainError(f"max_level must be >= 1, got {m}")
    if not 1 <= t <= m:
        raise DomainError(f"level {t} outside 1..{m}")
    w = basis.window
    if len(basis.intervals) == 1 and _closed_form_exact(basis.intervals[0], w.size):
        iv = basis.intervals[0]
        return IntervalBasis(w, [_closed_form_level(iv, m, t)], kind="grey")
    if len(basis.intervals) == 0:
        return IntervalBasis(w, [], kind="grey")
    n = w.size
    count = (m + 1) ** n
    if count > cap:
        raise CapacityError(
            f"level enumeration needs {count} grey patterns, cap is {cap}",
            required=count,
        )
    table = operator_from_basis(basis).table
    member: dict[tuple, bool] = {}
    member_list = []
    for g in enumerate_grey_patterns(w, m, cap=cap):
        hit = threshold_hit_sum(table, g.levels, m) >= t
        member[g.levels] = hit
        if hit:
            member_list.append(g.levels)
    pair_count = len(member_list) ** 2
    if pair_count > cap:
        raise CapacityError(
            f"level {t} has {len(member_list)} members; scanning "
            f"{pair_count} candidate intervals exceeds cap {cap}",
            required=pair_count,
        )
    memo: dict = {}

    def locally_maximal(lo: tuple, hi: tuple) -> bool:
        # An interval inside the level set is maximal exactly when no
        # single-coordinate widening (one level down at a lower bound or
        # one level up at an upper bound) stays inside the level set.
        for i in range(n):
            if lo[i] > 0:
                slab_lo = lo[:i] + (lo[i] - 1,) + lo[i + 1 :]
                slab_hi = hi[:i] + (lo[i] - 1,) + hi[i + 1 :]
                if _grey_subset_inside(member, slab_lo, slab_hi, memo):
                    return False
            if hi[i] < m:
                slab_lo = lo[:i] + (hi[i] + 1,) + lo[i + 1 :]
                slab_hi = hi[:i] + (hi[i] + 1,) + hi[i + 1 :]
                if _grey_subset_inside(member, slab_lo, slab_hi, memo):
                    return False
        return True

    maxima = []
    for lo in member_list:
        for hi in member_list:
            if (
                all(a <= b for a, b in zip(lo, hi))
                and _grey_subset_inside(member, lo, hi, memo)
                and locally_maximal(lo, hi)
            ):
                maxima.append(
                    PatternInterval(GreyPattern(w, lo, m), GreyPattern(w, hi, m))
                )
    return IntervalBasis(w, maximal_elements(maxima), kind="grey")


def stack_basis_member(basis: IntervalBasis, m: int, t: int, f: GreyPattern) -> bool:
    """Is f in the level-t kernel generated by a binary basis?

    Uses the closed-form box test for erosion-shaped and anti-dilation-shaped
    single-interval bases, and the counting predicate otherwise.
    """
    if basis.kind != "binary":
        raise KindError("stack_basis_member starts from a binary basis")
    if f.window != basis.window:
        raise DimensionError("pattern window differs from basis window")
    if f.max_level != m:
        raise DomainError(f"pattern max_level {f.max_level} differs from m={m}")
    if not 1 <= t <= m:
        raise DomainError(f"level {t} outside 1..{m}")
    if len(basis.intervals) == 1 and _closed_form_exact(
        basis.intervals[0], basis.window.size
    ):
        iv = basis.intervals[0]
        n = basis.window.size
        xlo, yhi = iv.lower.index, iv.upper.index
        for i in range(n):
            v = f.levels[i]
            lo = t if (xlo >> i) & 1 else 0
            hi = (t if (yhi >> i) & 1 else 0) + (m - t)
            if not lo <= v <= hi:
                return False
        return True
    table = operator_from_basis(basis).table
    return threshold_hit_sum(table, f.levels, m) >= t
