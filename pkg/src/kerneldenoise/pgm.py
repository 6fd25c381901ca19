"""PGM (netpbm grayscale) reading and writing.

Both the binary (P5) and ASCII (P2) encodings are supported on read and
write; only maxval <= 255 is accepted. The P5 byte layout on write is
pinned exactly — "P5\\n<w> <h>\\n255\\n" then row-major pixel bytes — so
images round-trip bit-identically across implementations.
"""

from __future__ import annotations

import numpy as np


class PgmError(Exception):
    """Base class for PGM I/O failures."""


class PgmParseError(PgmError):
    """Malformed PGM input; `offset` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class PgmUnsupportedError(PgmError):
    """Well-formed PGM that this reader does not handle (maxval > 255)."""


_WHITESPACE = b" \t\r\n\x0b\x0c"


class _Scanner:
    """Header tokenizer over raw bytes, tracking offsets for error reports."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_separators(self) -> None:
        d, n = self.data, len(self.data)
        while self.pos < n:
            c = d[self.pos : self.pos + 1]
            if c == b"#":
                while self.pos < n and d[self.pos : self.pos + 1] != b"\n":
                    self.pos += 1
            elif c in _WHITESPACE:
                self.pos += 1
            else:
                return

    def next_token(self, what: str) -> tuple[bytes, int]:
        self.skip_separators()
        start = self.pos
        d, n = self.data, len(self.data)
        while self.pos < n:
            c = d[self.pos : self.pos + 1]
            if c in _WHITESPACE or c == b"#":
                break
            self.pos += 1
        if self.pos == start:
            raise PgmParseError(f"expected {what}, found end of data", start)
        return d[start : self.pos], start

    def next_int(self, what: str) -> tuple[int, int]:
        tok, start = self.next_token(what)
        if not tok.isdigit():
            raise PgmParseError(f"expected {what}, found {tok[:20]!r}", start)
        return int(tok), start


def _read_header(sc: _Scanner) -> tuple[bytes, int, int, int]:
    magic, off = sc.next_token("magic number")
    if magic not in (b"P5", b"P2"):
        raise PgmParseError(f"not a P5/P2 PGM, magic is {magic[:20]!r}", off)
    width, off_w = sc.next_int("width")
    height, off_h = sc.next_int("height")
    if width < 1:
        raise PgmParseError(f"width must be positive, got {width}", off_w)
    if height < 1:
        raise PgmParseError(f"height must be positive, got {height}", off_h)
    maxval, off_m = sc.next_int("maxval")
    if maxval < 1:
        raise PgmParseError(f"maxval must be positive, got {maxval}", off_m)
    if maxval > 255:
        raise PgmUnsupportedError(f"maxval {maxval} exceeds 255; only 8-bit PGM supported")
    return magic, width, height, maxval


def read_pgm(data: bytes) -> np.ndarray:
    """Decode P5/P2 bytes into a float image with values 0..maxval."""
    if not isinstance(data, (bytes, bytearray, memoryview)):
        raise TypeError(f"read_pgm wants bytes, got {type(data).__name__}")
    data = bytes(data)
    sc = _Scanner(data)
    magic, width, height, maxval = _read_header(sc)
    count = width * height
    if magic == b"P5":
        # Exactly one separator byte between maxval and the payload.
        if sc.pos >= len(data) or data[sc.pos : sc.pos + 1] not in _WHITESPACE:
            raise PgmParseError("expected single whitespace after maxval", sc.pos)
        start = sc.pos + 1
        payload = data[start : start + count]
        if len(payload) < count:
            raise PgmParseError(
                f"truncated pixel data: expected {count} bytes, got {len(payload)}",
                len(data),
            )
        img = np.frombuffer(payload, dtype=np.uint8).astype(float)
    else:
        img = np.empty(count)
        for k in range(count):
            value, off = sc.next_int("pixel value")
            if value > maxval:
                raise PgmParseError(f"pixel value {value} exceeds maxval {maxval}", off)
            img[k] = value
    return img.reshape(height, width)


def _quantize(img) -> np.ndarray:
    arr = np.asarray(img, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"image must be a nonempty 2D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image values must be finite")
    # Half-up rounding, pinned for cross-implementation bit-exactness.
    return np.clip(np.floor(arr + 0.5), 0, 255).astype(np.uint8)


def write_pgm(img, format: str = "P5") -> bytes:
    """Encode an image as PGM bytes (values rounded half-up, clamped)."""
    if format not in ("P5", "P2"):
        raise ValueError(f"format must be 'P5' or 'P2', got {format!r}")
    q = _quantize(img)
    h, w = q.shape
    header = b"%s\n%d %d\n255\n" % (format.encode(), w, h)
    if format == "P5":
        return header + q.tobytes()
    lines = []
    for row in q:
        line = ""
        for v in row:
            piece = str(int(v))
            if line and len(line) + 1 + len(piece) > 70:
                lines.append(line)
                line = piece
            else:
                line = piece if not line else line + " " + piece
        lines.append(line)
    return header + ("\n".join(lines) + "\n").encode()


def load_pgm(path) -> np.ndarray:
    with open(path, "rb") as f:
        return read_pgm(f.read())


def save_pgm(path, img, format: str = "P5") -> None:
    data = write_pgm(img, format)
    with open(path, "wb") as f:
        f.write(data)
