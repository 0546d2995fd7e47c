"""Versioned text formats for operators and bases.

Operator file::

    stackmorph-op v1
    window: (-1,0) (0,-1) (0,0) (0,1) (1,0)
    m: 255
    table-hex: 80e8

table-hex encodes the table as an integer whose bit i is the table entry at
pattern index i, written in lowercase hex and zero-padded to ceil(2^n / 4)
digits for a window of n offsets.

Basis file::

    stackmorph-basis v1
    window: (0,0) (0,1)
    interval: 1 1

Binary interval endpoints are hex pattern indices padded to ceil(n / 4)
digits. Grey basis files carry an ``m:`` line and per-level lines of
comma-separated levels::

    stackmorph-basis v1
    window: (0,0) (0,1)
    m: 2
    interval[1]: 1,0 2,0
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .lattice import BinaryPattern, GreyPattern, PatternInterval, Window
from .operators import SetOperator
from .representations import IntervalBasis

OP_MAGIC = "stackmorph-op v1"
BASIS_MAGIC = "stackmorph-basis v1"

_OFFSET_RE = re.compile(r"^\((-?\d+),(-?\d+)\)$")


def _hex_width(bits: int) -> int:
    return max(1, (bits + 3) // 4)


def _format_window(window: Window) -> str:
    return "window: " + " ".join(f"({dy},{dx})" for dy, dx in window.offsets)


def format_operator(op: SetOperator, m: int) -> str:
    n = op.window.size
    value = 0
    for i, bit in enumerate(op.table):
        if bit:
            value |= 1 << i
    hexstr = format(value, "x").zfill(_hex_width(1 << n))
    return "\n".join(
        [OP_MAGIC, _format_window(op.window), f"m: {m}", f"table-hex: {hexstr}", ""]
    )


def format_basis(basis: IntervalBasis) -> str:
    """Binary basis to text; grey bases go through format_stack_basis."""
    if basis.kind != "binary":
        raise ParseError("grey bases need per-level lines; use format_stack_basis", 0)
    width = _hex_width(basis.window.size)
    lines = [BASIS_MAGIC, _format_window(basis.window)]
    for iv in basis.intervals:
        lines.append(
            f"interval: {format(iv.lower.index, 'x').zfill(width)} "
            f"{format(iv.upper.index, 'x').zfill(width)}"
        )
    lines.append("")
    return "\n".join(lines)


def format_stack_basis(per_level: dict[int, IntervalBasis], m: int) -> str:
    lines = [BASIS_MAGIC]
    window = None
    for t in sorted(per_level):
        b = per_level[t]
        if window is None:
            window = b.window
            lines.append(_format_window(window))
            lines.append(f"m: {m}")
        for iv in b.intervals:
            lo = ",".join(str(v) for v in iv.lower.levels)
            hi = ",".join(str(v) for v in iv.upper.levels)
            lines.append(f"interval[{t}]: {lo} {hi}")
    if window is None:
        raise ParseError("cannot serialize an empty level map", 0)
    lines.append("")
    return "\n".join(lines)


class _Lines:
    """Line iterator that remembers each line's character offset."""

    def __init__(self, text: str):
        self.rows = []
        pos = 0
        for raw in text.split("\n"):
            stripped = raw.strip()
            if stripped:
                self.rows.append((stripped, pos))
            pos += len(raw) + 1
        self.i = 0

    def next(self, what: str) -> tuple[str, int]:
        if self.i >= len(self.rows):
            raise ParseError(f"unexpected end of file, expected {what}", 0)
        row = self.rows[self.i]
        self.i += 1
        return row

    def peek(self) -> tuple[str, int] | None:
        return self.rows[self.i] if self.i < len(self.rows) else None


def _parse_window_line(line: str, at: int) -> Window:
    if not line.startswith("window:"):
        raise ParseError(f"expected 'window:' line, got {line[:30]!r}", at)
    offsets = []
    for tok in line[len("window:") :].split():
        mm = _OFFSET_RE.match(tok)
        if not mm:
            raise ParseError(f"bad window offset {tok!r}", at)
        offsets.append((int(mm.group(1)), int(mm.group(2))))
    if not offsets:
        raise ParseError("window line has no offsets", at)
    return Window(tuple(offsets))


def _parse_int_line(line: str, key: str, at: int) -> int:
    if not line.startswith(key + ":"):
        raise ParseError(f"expected '{key}:' line, got {line[:30]!r}", at)
    try:
        return int(line[len(key) + 1 :].strip())
    except ValueError:
        raise ParseError(f"bad integer on '{key}:' line", at) from None


def parse_operator(text: str) -> tuple[SetOperator, int]:
    lines = _Lines(text)
    magic, at = lines.next("magic line")
    if magic != OP_MAGIC:
        raise ParseError(f"expected {OP_MAGIC!r}, got {magic[:40]!r}", at)
    wline, at = lines.next("window line")
    window = _parse_window_line(wline, at)
    mline, at = lines.next("m line")
    m = _parse_int_line(mline, "m", at)
    if m < 1:
        raise ParseError(f"m must be >= 1, got {m}", at)
    tline, at = lines.next("table-hex line")
    if not tline.startswith("table-hex:"):
        raise ParseError(f"expected 'table-hex:' line, got {tline[:30]!r}", at)
    hexstr = tline[len("table-hex:") :].strip()
    try:
        value = int(hexstr, 16)
    except ValueError:
        raise ParseError(f"bad hex table {hexstr[:20]!r}", at) from None
    n = window.size
    size = 1 << n
    if value >> size:
        raise ParseError(
            f"table hex has set bits beyond the {size} patterns of this window", at
        )
    table = np.zeros(size, dtype=np.uint8)
    for i in range(size):
        if (value >> i) & 1:
            table[i] = 1
    extra = lines.peek()
    if extra is not None:
        raise ParseError(f"unexpected trailing line {extra[0][:30]!r}", extra[1])
    return SetOperator(window, table), m


@dataclass(frozen=True)
class ParsedBasis:
    window: Window
    kind: str
    binary: IntervalBasis | None
    per_level: dict[int, IntervalBasis] | None
    m: int | None


_GREY_IV_RE = re.compile(r"^interval\[(\d+)\]:$")


def parse_basis(text: str) -> ParsedBasis:
    lines = _Lines(text)
    magic, at = lines.next("magic line")
    if magic != BASIS_MAGIC:
        raise ParseError(f"expected {BASIS_MAGIC!r}, got {magic[:40]!r}", at)
    wline, at = lines.next("window line")
    window = _parse_window_line(wline, at)
    n = window.size

    m = None
    row = lines.peek()
    if row is not None and row[0].startswith("m:"):
        lines.next("m line")
        m = _parse_int_line(row[0], "m", row[1])

    binary_ivs: list[PatternInterval] = []
    grey_ivs: dict[int, list[PatternInterval]] = {}
    while True:
        row = lines.peek()
        if row is None:
            break
        line, at = lines.next("interval line")
        head, _, rest = line.partition(" ")
        parts = rest.split()
        if len(parts) != 2:
            raise ParseError(f"interval line needs two endpoints: {line[:40]!r}", at)
        if head == "interval:":
            try:
                lo, hi = int(parts[0], 16), int(parts[1], 16)
            except ValueError:
                raise ParseError(f"bad hex endpoint on {line[:40]!r}", at) from None
            if lo >> n or hi >> n:
                raise ParseError(f"endpoint exceeds {n}-bit patterns", at)
            binary_ivs.append(
                PatternInterval(BinaryPattern(window, lo), BinaryPattern(window, hi))
            )
            continue
        gm = _GREY_IV_RE.match(head)
        if gm:
            if m is None:
                raise ParseError("grey interval lines require an 'm:' line first", at)
            t = int(gm.group(1))
            if not 1 <= t <= m:
                raise ParseError(f"level {t} outside 1..{m}", at)
            try:
                lo = tuple(int(v) for v in parts[0].split(","))
                hi = tuple(int(v) for v in parts[1].split(","))
            except ValueError:
                raise ParseError(f"bad level list on {line[:40]!r}", at) from None
            if len(lo) != n or len(hi) != n:
                raise ParseError(
                    f"endpoints need {n} levels, got {len(lo)} and {len(hi)}", at
                )
            grey_ivs.setdefault(t, []).append(
                PatternInterval(GreyPattern(window, lo, m), GreyPattern(window, hi, m))
            )
            continue
        raise ParseError(f"unrecognized line {line[:40]!r}", at)

    if binary_ivs and grey_ivs:
        raise ParseError("file mixes binary and grey interval lines", 0)
    if grey_ivs:
        per_level = {
            t: IntervalBasis(window, ivs, kind="grey") for t, ivs in grey_ivs.items()
        }
        return ParsedBasis(window, "grey", None, per_level, m)
    return ParsedBasis(
        window, "binary", IntervalBasis(window, binary_ivs, kind="binary"), None, m
    )
