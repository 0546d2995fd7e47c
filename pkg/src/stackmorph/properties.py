"""Lattice-property detection for set operators and their stack extensions.

Ten properties are tracked: increasing, decreasing, extensive,
anti-extensive, erosion, dilation, anti-dilation, anti-erosion,
sup-generating, inf-generating. Monotone flags come from single-bit
neighbor checks; the four meet/join properties and the generating pair are
read off the kernel basis, with the co-variants obtained through the dual
order (complement inputs and output). ``verify_stack_inheritance`` then
recomputes every flag on the grey side by brute force and reports whether
the two layers agree, which they must.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import CapacityError, DomainError
from .lattice import (
    ENUMERATION_CAP,
    BinaryPattern,
    GreyPattern,
    Window,
)
from .operators import (
    BorderPolicy,
    SetOperator,
    StackOperator,
    apply_set,
    apply_stack,
    dual_operator,
    eval_set,
    threshold_hit_sum,
)
from .representations import basis_of, kernel_of
from .threshold import GreyImage, cross_section

PROPERTY_NAMES = (
    "increasing",
    "decreasing",
    "extensive",
    "anti_extensive",
    "erosion",
    "dilation",
    "anti_dilation",
    "anti_erosion",
    "sup_generating",
    "inf_generating",
)

#: Properties defined by a meet/join equation over pattern pairs.
ALGEBRAIC_PROPERTIES = ("erosion", "dilation", "anti_dilation", "anti_erosion")

_CHUNK = 1 << 20


@dataclass(frozen=True)
class PropertyReport:
    """Flags per property; None marks not-applicable (origin outside window).

    ``witnesses`` maps a failed flag to a counterexample pattern-index pair
    when one was computed; point-wise failures use the same pattern twice.
    """

    window: Window
    increasing: bool
    decreasing: bool
    extensive: bool | None
    anti_extensive: bool | None
    erosion: bool
    dilation: bool
    anti_dilation: bool
    anti_erosion: bool
    sup_generating: bool
    inf_generating: bool
    witnesses: dict

    def flag(self, name: str) -> bool | None:
        if name not in PROPERTY_NAMES:
            raise DomainError(f"unknown property {name!r}")
        return getattr(self, name)

    def items(self) -> Iterator[tuple[str, bool | None]]:
        for name in PROPERTY_NAMES:
            yield name, getattr(self, name)

    def render(self) -> str:
        """Stable text table: property, holds, optional witness in hex."""
        digits = max(1, (self.window.size + 3) // 4)
        lines = [f"{'property':<16} {'holds':<6} witness"]
        for name, value in self.items():
            if value is None:
                shown = "n/a"
            else:
                shown = "yes" if value else "no"
            wit = self.witnesses.get(name)
            if wit is None:
                wtext = "-"
            else:
                a, b = wit
                wtext = f"0x{a:0{digits}x} -> 0x{b:0{digits}x}"
            lines.append(f"{name:<16} {shown:<6} {wtext}")
        return "\n".join(lines)


def _first_pair_violation(table: np.ndarray, n: int, decreasing: bool):
    """First (X, X|bit) pair breaking monotonicity, scanning X-major."""
    best = None
    size = 1 << n
    for e in range(n):
        bit = 1 << e
        for start in range(0, size, _CHUNK):
            idx = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
            lower = idx[(idx & bit) == 0]
            if lower.size == 0:
                continue
            lo_vals = table[lower]
            hi_vals = table[lower | bit]
            bad = lower[lo_vals < hi_vals] if decreasing else lower[lo_vals > hi_vals]
            if bad.size:
                cand = (int(bad[0]), int(bad[0]) | bit)
                if best is None or cand < best:
                    best = cand
                break
    return best


def check_increasing(op: SetOperator):
    """(flag, witness): X <= Y implies table[X] <= table[Y].

    Checking single-bit raises suffices; any violating comparable pair
    yields a violating pair along a chain of single-bit raises.
    """
    wit = _first_pair_violation(op.table, op.window.size, decreasing=False)
    return wit is None, wit


def check_decreasing(op: SetOperator):
    """(flag, witness): X <= Y implies table[X] >= table[Y]."""
    wit = _first_pair_violation(op.table, op.window.size, decreasing=True)
    return wit is None, wit


def _origin_column(op: SetOperator):
    o = op.window.origin_index
    if o is None:
        return None
    size = 1 << op.window.size
    idx = np.arange(size, dtype=np.int64)
    return ((idx >> o) & 1).astype(op.table.dtype)


def check_extensive(op: SetOperator):
    """(flag, witness): output covers the origin bit. None without origin."""
    col = _origin_column(op)
    if col is None:
        return None, None
    bad = np.flatnonzero(op.table < col)
    if bad.size:
        x = int(bad[0])
        return False, (x, x)
    return True, None


def check_anti_extensive(op: SetOperator):
    """(flag, witness): output stays under the origin bit. None without origin."""
    col = _origin_column(op)
    if col is None:
        return None, None
    bad = np.flatnonzero(op.table > col)
    if bad.size:
        x = int(bad[0])
        return False, (x, x)
    return True, None


def check_algebraic(op: SetOperator, prop: str):
    """Test a meet/join equation over every pattern pair.

    erosion:       op(X & Y) = op(X) & op(Y)   and op(full) = 1
    dilation:      op(X | Y) = op(X) | op(Y)   and op(0) = 0
    anti_dilation: op(X | Y) = op(X) & op(Y)   and op(0) = 1
    anti_erosion:  op(X & Y) = op(X) | op(Y)   and op(full) = 0

    The side condition is the empty meet/join of the defining family; it is
    what separates the two constant operators from the genuine article, and
    it makes this check agree with the kernel-shape criterion.
    """
    if prop not in ALGEBRAIC_PROPERTIES:
        raise DomainError(f"no algebraic equation for property {prop!r}")
    n = op.window.size
    if n > 9:
        raise CapacityError(
            f"pairwise check needs |W| <= 9, got {n}", required=1 << (2 * n)
        )
    t = op.table.astype(np.int16)
    size = 1 << n
    full = size - 1
    if prop == "erosion" and t[full] != 1:
        return False, (full, full)
    if prop == "dilation" and t[0] != 0:
        return False, (0, 0)
    if prop == "anti_dilation" and t[0] != 1:
        return False, (0, 0)
    if prop == "anti_erosion" and t[full] != 0:
        return False, (full, full)
    idx = np.arange(size, dtype=np.int64)
    xx = idx[:, None]
    yy = idx[None, :]
    if prop in ("erosion", "anti_erosion"):
        combined = t[xx & yy]
    else:
        combined = t[xx | yy]
    if prop in ("erosion", "anti_dilation"):
        separate = np.minimum(t[xx], t[yy])
    else:
        separate = np.maximum(t[xx], t[yy])
    bad = np.argwhere(combined != separate)
    if bad.size:
        x, y = bad[0]
        return False, (int(x), int(y))
    return True, None


def _single_interval_shape(op: SetOperator):
    """(single, lower_is_bottom, upper_is_top) of the operator's basis."""
    basis = basis_of(kernel_of(op))
    if len(basis) != 1:
        return False, False, False
    iv = basis.intervals[0]
    full = (1 << op.window.size) - 1
    return True, iv.lower.index == 0, iv.upper.index == full


def check_structural(op: SetOperator) -> PropertyReport:
    """All ten flags from table scans, the basis shape, and the dual order.

    erosion <=> the kernel is one interval reaching the full pattern;
    anti-dilation <=> one interval starting at the empty pattern;
    sup-generating <=> exactly one interval. The dual operator supplies
    dilation, anti-erosion, and inf-generating.
    """
    inc, w_inc = check_increasing(op)
    dec, w_dec = check_decreasing(op)
    ext, w_ext = check_extensive(op)
    anti, w_anti = check_anti_extensive(op)
    single, lower_bottom, upper_top = _single_interval_shape(op)
    dual = dual_operator(op)
    dual_single, dual_lower_bottom, dual_upper_top = _single_interval_shape(dual)
    witnesses = {}
    if w_inc is not None:
        witnesses["increasing"] = w_inc
    if w_dec is not None:
        witnesses["decreasing"] = w_dec
    if w_ext is not None:
        witnesses["extensive"] = w_ext
    if w_anti is not None:
        witnesses["anti_extensive"] = w_anti
    return PropertyReport(
        window=op.window,
        increasing=inc,
        decreasing=dec,
        extensive=ext,
        anti_extensive=anti,
        erosion=single and upper_top,
        dilation=dual_single and dual_upper_top,
        anti_dilation=single and lower_bottom,
        anti_erosion=dual_single and dual_lower_bottom,
        sup_generating=single,
        inf_generating=dual_single,
        witnesses=witnesses,
    )


def _grey_values(op: SetOperator, m: int, cap: int) -> tuple[np.ndarray, np.ndarray]:
    """(digit matrix, stack output) over every grey pattern, index order."""
    n = op.window.size
    count = (m + 1) ** n
    if count > cap:
        raise CapacityError(
            f"grey enumeration needs {count} patterns, cap is {cap}", required=count
        )
    digits = np.empty((count, n), dtype=np.int64)
    idx = np.arange(count, dtype=np.int64)
    rest = idx.copy()
    for i in range(n):
        digits[:, i] = rest % (m + 1)
        rest //= m + 1
    table = op.table.astype(np.int64)
    vals = np.zeros(count, dtype=np.int64)
    for t in range(1, m + 1):
        patt = np.zeros(count, dtype=np.int64)
        for i in range(n):
            patt |= (digits[:, i] >= t).astype(np.int64) << i
        vals += table[patt]
    return digits, vals


def _encode(digits: np.ndarray, m: int) -> np.ndarray:
    n = digits.shape[-1]
    out = np.zeros(digits.shape[:-1], dtype=np.int64)
    weight = 1
    for i in range(n):
        out += digits[..., i] * weight
        weight *= m + 1
    return out


def _grey_flags(op: SetOperator, m: int, cap: int) -> dict[str, bool | None]:
    """Brute-force grey-side property detection for the stack extension."""
    n = op.window.size
    digits, vals = _grey_values(op, m, cap)
    count = digits.shape[0]
    if count * count > cap:
        raise CapacityError(
            f"grey pairwise checks need {count * count} pairs, cap is {cap}",
            required=count * count,
        )
    comparable = np.ones((count, count), dtype=bool)
    meet_digits = np.empty((count, count, n), dtype=np.int64)
    join_digits = np.empty((count, count, n), dtype=np.int64)
    for i in range(n):
        col = digits[:, i]
        comparable &= col[:, None] <= col[None, :]
        meet_digits[:, :, i] = np.minimum(col[:, None], col[None, :])
        join_digits[:, :, i] = np.maximum(col[:, None], col[None, :])
    meet_vals = vals[_encode(meet_digits, m)]
    join_vals = vals[_encode(join_digits, m)]
    lo_pair = np.minimum(vals[:, None], vals[None, :])
    hi_pair = np.maximum(vals[:, None], vals[None, :])

    flags: dict[str, bool | None] = {}
    flags["increasing"] = bool((vals[:, None] <= vals[None, :])[comparable].all())
    flags["decreasing"] = bool((vals[:, None] >= vals[None, :])[comparable].all())
    o = op.window.origin_index
    if o is None:
        flags["extensive"] = None
        flags["anti_extensive"] = None
    else:
        flags["extensive"] = bool((vals >= digits[:, o]).all())
        flags["anti_extensive"] = bool((vals <= digits[:, o]).all())
    top = count - 1
    flags["erosion"] = bool((meet_vals == lo_pair).all() and vals[top] == m)
    flags["dilation"] = bool((join_vals == hi_pair).all() and vals[0] == 0)
    flags["anti_dilation"] = bool((join_vals == lo_pair).all() and vals[0] == m)
    flags["anti_erosion"] = bool((meet_vals == hi_pair).all() and vals[top] == 0)
    flags["sup_generating"] = _grey_sup_generating(digits, vals, m)
    dual_digits = m - digits
    dual_vals = np.empty_like(vals)
    dual_vals[_encode(dual_digits, m)] = m - vals
    flags["inf_generating"] = _grey_sup_generating(digits, dual_vals, m)
    return flags


def _grey_sup_generating(digits: np.ndarray, vals: np.ndarray, m: int) -> bool:
    """Every level set {f : value >= t} is exactly one grey interval."""
    for t in range(1, m + 1):
        members = digits[vals >= t]
        if members.shape[0] == 0:
            return False
        lo = members.min(axis=0)
        hi = members.max(axis=0)
        volume = int(np.prod(hi - lo + 1))
        if volume != members.shape[0]:
            return False
    return True


@dataclass(frozen=True)
class StackInheritanceReport:
    """Set-side flags next to independently computed grey-side flags."""

    max_level: int
    set_report: PropertyReport
    grey_flags: dict

    def matches(self) -> dict[str, bool]:
        return {
            name: self.set_report.flag(name) == self.grey_flags[name]
            for name in PROPERTY_NAMES
        }

    @property
    def all_match(self) -> bool:
        return all(self.matches().values())

    def render(self) -> str:
        lines = [f"{'property':<16} {'set':<6} {'stack':<6} agree"]
        for name in PROPERTY_NAMES:
            s = self.set_report.flag(name)
            g = self.grey_flags[name]
            fmt = lambda v: "n/a" if v is None else ("yes" if v else "no")
            lines.append(
                f"{name:<16} {fmt(s):<6} {fmt(g):<6} {'yes' if s == g else 'NO'}"
            )
        return "\n".join(lines)


def verify_stack_inheritance(
    op: SetOperator, m: int, cap: int = ENUMERATION_CAP
) -> StackInheritanceReport:
    """Detect every property on both layers and report agreement.

    The grey side is computed by brute force over all (m+1)^|W| patterns
    (meet/join equations with their empty-family side conditions, level-set
    shapes for the generating pair), never by inheriting the set flags.
    """
    if m < 1:
        raise DomainError(f"max_level must be >= 1, got {m}")
    set_report = check_structural(op)
    grey = _grey_flags(op, m, cap)
    return StackInheritanceReport(max_level=m, set_report=set_report, grey_flags=grey)


@dataclass(frozen=True)
class CommutationWitness:
    """A grey patch and level where thresholding does not commute.

    At the witness: cross_section(stack output, level) differs from the set
    operator applied to cross_section(input, level) at the patch origin.
    """

    pattern: GreyPattern
    level: int


def _witness_from_pair(op: SetOperator, m: int, pair: tuple[int, int]):
    """Build a commutation violation from an increasing-violation pair.

    For X <= Y with op(X)=1, op(Y)=0, the patch taking m on X, m-1 on Y\\X
    and 0 elsewhere has cross-sections Y (t < m) and X (t = m), so the
    stack output is 1: thresholding the output at m gives 0, but the set
    operator on the level-m cross-section gives 1. Needs m >= 2.
    """
    x_idx, y_idx = pair
    n = op.window.size
    levels = []
    for i in range(n):
        if (x_idx >> i) & 1:
            levels.append(m)
        elif (y_idx >> i) & 1:
            levels.append(m - 1)
        else:
            levels.append(0)
    f = GreyPattern(op.window, tuple(levels), m)
    return f


def _commutes_at(op: SetOperator, m: int, f: GreyPattern, t: int) -> bool:
    value = threshold_hit_sum(op.table, f.levels, m)
    lhs = 1 if value >= t else 0
    rhs = eval_set(op, cross_section(f, t))
    return lhs == rhs


def check_stack_filter(
    op: SetOperator,
    m: int,
    trials: int = 50,
    seed: int = 0,
    shape: tuple[int, int] = (16, 16),
    border: BorderPolicy = BorderPolicy.ZERO_PAD,
    cap: int = ENUMERATION_CAP,
):
    """(is_filter, witness): does thresholding commute with the extension?

    Commutation at every level and input is equivalent to the set operator
    being increasing, so the increasing check decides the answer. When it
    holds, the equality is additionally exercised on ``trials`` random grey
    images at every level. When it fails, a concrete witness patch is
    built from the violating pair (or found by scanning grey patterns in
    increasing l1 order, smallest first). For m = 1 thresholding commutes
    trivially and every operator passes.
    """
    if m < 1:
        raise DomainError(f"max_level must be >= 1, got {m}")
    inc, pair = check_increasing(op)
    if inc:
        rng = np.random.default_rng(seed)
        sop = StackOperator(op, m)
        for _ in range(trials):
            f = GreyImage(rng.integers(0, m + 1, shape), m)
            out = apply_stack(sop, f, border)
            for t in range(1, m + 1):
                lhs = cross_section(out, t)
                rhs = apply_set(op, cross_section(f, t), border)
                if lhs != rhs:
                    where = np.argwhere(lhs.bits != rhs.bits)[0]
                    patch = _patch_at(f, op.window, tuple(where))
                    return False, CommutationWitness(patch, t)
        return True, None
    if m == 1:
        return True, None
    f = _witness_from_pair(op, m, pair)
    if not _commutes_at(op, m, f, m):
        return False, CommutationWitness(f, m)
    # Constructive witness should always violate for m >= 2; scan anyway.
    n = op.window.size
    count = (m + 1) ** n
    if count > cap:
        raise CapacityError(
            f"witness scan needs {count} grey patterns, cap is {cap}", required=count
        )
    from .lattice import enumerate_grey_patterns

    for g in sorted(enumerate_grey_patterns(op.window, m, cap=cap), key=lambda p: sum(p.levels)):
        for t in range(1, m + 1):
            if not _commutes_at(op, m, g, t):
                return False, CommutationWitness(g, t)
    raise AssertionError("non-increasing operator with no commutation violation")


def _patch_at(f: GreyImage, window: Window, pos: tuple[int, int]) -> GreyPattern:
    """Window patch of f at pos under zero padding."""
    y, x = pos
    levels = []
    for dy, dx in window.offsets:
        yy, xx = y + dy, x + dx
        if 0 <= yy < f.height and 0 <= xx < f.width:
            levels.append(int(f.levels[yy, xx]))
        else:
            levels.append(0)
    return GreyPattern(window, tuple(levels), f.max_level)
