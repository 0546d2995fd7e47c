"""PGM image reader and writer.

Supports the plain (P2) and raw (P5) variants. The raw variant carries one
byte per sample, so its maxval is capped at 255; the plain variant goes up
to 65535. Comments run from '#' to end of line and may appear between any
header tokens after the magic.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import DataError, DomainError, ParseError
from .threshold import GreyImage

_WS = b" \t\r\n\v\f"


class _Cursor:
    """Byte-offset-tracking tokenizer for PGM headers and plain payloads."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_ws_and_comments(self) -> None:
        d, n = self.data, len(self.data)
        while self.pos < n:
            c = self.data[self.pos : self.pos + 1]
            if c in (b"#",):
                nl = d.find(b"\n", self.pos)
                self.pos = n if nl < 0 else nl + 1
            elif c in (b" ", b"\t", b"\r", b"\n", b"\v", b"\f"):
                self.pos += 1
            else:
                return

    def token(self, what: str) -> tuple[bytes, int]:
        self.skip_ws_and_comments()
        if self.pos >= len(self.data):
            raise ParseError(f"unexpected end of file reading {what}", self.pos)
        start = self.pos
        d, n = self.data, len(self.data)
        while self.pos < n and d[self.pos : self.pos + 1] not in (
            b" ",
            b"\t",
            b"\r",
            b"\n",
            b"\v",
            b"\f",
            b"#",
        ):
            self.pos += 1
        return d[start : self.pos], start

    def int_token(self, what: str) -> tuple[int, int]:
        tok, start = self.token(what)
        try:
            return int(tok), start
        except ValueError:
            raise ParseError(
                f"expected integer for {what}, got {tok[:20]!r}", start
            ) from None


def read_pgm(path: str | os.PathLike) -> GreyImage:
    """Parse a P2 or P5 file into a grey image with max_level = maxval."""
    with open(path, "rb") as fh:
        data = fh.read()
    cur = _Cursor(data)
    magic, at = cur.token("magic number")
    if magic not in (b"P2", b"P5"):
        raise ParseError(f"not a PGM file (magic {magic[:8]!r})", at)
    width, at = cur.int_token("width")
    if width <= 0:
        raise ParseError(f"width must be positive, got {width}", at)
    height, at = cur.int_token("height")
    if height <= 0:
        raise ParseError(f"height must be positive, got {height}", at)
    maxval, at = cur.int_token("maxval")
    if not 1 <= maxval <= 65535:
        raise ParseError(f"maxval must be in 1..65535, got {maxval}", at)

    count = width * height
    if magic == b"P5":
        if maxval > 255:
            raise ParseError(
                f"raw PGM carries one byte per sample, maxval {maxval} > 255", at
            )
        # Exactly one whitespace byte separates maxval from the payload.
        if cur.pos >= len(data) or data[cur.pos : cur.pos + 1] not in (
            b" ",
            b"\t",
            b"\r",
            b"\n",
            b"\v",
            b"\f",
        ):
            raise ParseError("missing whitespace before raw payload", cur.pos)
        start = cur.pos + 1
        payload = data[start : start + count]
        if len(payload) < count:
            raise ParseError(
                f"payload holds {len(payload)} bytes, need {count}",
                start + len(payload),
            )
        levels = np.frombuffer(payload, dtype=np.uint8, count=count).astype(np.int32)
        bad = np.nonzero(levels > maxval)[0]
        if bad.size:
            i = int(bad[0])
            raise ParseError(
                f"pixel value {int(levels[i])} exceeds maxval {maxval}", start + i
            )
    else:
        levels = np.empty(count, dtype=np.int32)
        for i in range(count):
            v, at = cur.int_token(f"pixel {i}")
            if not 0 <= v <= maxval:
                raise ParseError(
                    f"pixel value {v} outside 0..{maxval}", at
                )
            levels[i] = v
    return GreyImage(levels.reshape(height, width), maxval)


def write_pgm(img: GreyImage, path: str | os.PathLike, format: str = "P5") -> None:
    """Write a grey image; maxval is the image's max_level."""
    if format not in ("P2", "P5"):
        raise DomainError(f"format must be P2 or P5, got {format!r}")
    h, w = img.levels.shape
    header = f"{format}\n{w} {h}\n{img.max_level}\n".encode("ascii")
    if format == "P5":
        if img.max_level > 255:
            raise DataError(
                f"raw PGM cannot hold max_level {img.max_level} (limit 255)"
            )
        body = img.levels.astype(np.uint8).tobytes()
    else:
        flat = img.levels.ravel()
        lines = []
        for i in range(0, flat.size, 16):
            lines.append(" ".join(str(int(v)) for v in flat[i : i + 16]))
        body = ("\n".join(lines) + "\n").encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(body)
