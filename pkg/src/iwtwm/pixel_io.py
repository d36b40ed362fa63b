"""Binary netpbm codecs (P5 graymaps, P4 bitmaps) and the in-memory image types.

Only the binary variants are accepted. The writers emit a canonical header
(single newline separators, no comments) so output is byte-deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "GrayImage",
    "BitImage",
    "NetpbmError",
    "MalformedHeaderError",
    "UnsupportedMaxvalError",
    "TruncatedDataError",
    "read_pgm",
    "write_pgm",
    "read_pbm",
    "write_pbm",
    "load_pgm",
    "save_pgm",
    "load_pbm",
    "save_pbm",
]

_WHITESPACE = b" \t\n\r\v\f"


class NetpbmError(ValueError):
    """Base class for netpbm decoding failures."""


class MalformedHeaderError(NetpbmError):
    pass


class UnsupportedMaxvalError(NetpbmError):
    pass


class TruncatedDataError(NetpbmError):
    pass


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale image; ``pixels`` has shape (height, width) and dtype uint8."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"expected a non-empty 2-D pixel array, got shape {px.shape}")
        if px.dtype != np.uint8:
            if px.size and (px.min() < 0 or px.max() > 255):
                raise ValueError("pixel values must lie in [0, 255]")
            px = px.astype(np.uint8)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height})"


@dataclass(frozen=True, eq=False)
class BitImage:
    """Binary image; ``bits`` has shape (height, width), values in {0, 1}, 1 = black.

    Zero-sized images are allowed so an empty watermark can be represented.
    """

    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits)
        if b.ndim != 2:
            raise ValueError(f"expected a 2-D bit array, got shape {b.shape}")
        if b.size and (b.min() < 0 or b.max() > 1):
            raise ValueError("bit values must be 0 or 1")
        object.__setattr__(self, "bits", b.astype(np.uint8))

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    def flatten(self) -> np.ndarray:
        """Row-major bitstream."""
        return self.bits.ravel()

    @classmethod
    def from_bits(cls, bits, width: int, height: int) -> "BitImage":
        return cls(np.asarray(bits, dtype=np.uint8).reshape(height, width))

    def __eq__(self, other):
        if not isinstance(other, BitImage):
            return NotImplemented
        return self.bits.shape == other.bits.shape and np.array_equal(self.bits, other.bits)

    def __repr__(self):
        return f"BitImage({self.width}x{self.height})"


def _parse_header(data: bytes, magic: bytes, nfields: int):
    """Return the integer header fields and the offset of the raster."""
    if data[:2] != magic:
        raise MalformedHeaderError(f"expected magic {magic!r}, got {data[:2]!r}")
    pos = 2
    fields = []
    n = len(data)
    while len(fields) < nfields:
        if pos >= n:
            raise MalformedHeaderError("header ends prematurely")
        ch = data[pos : pos + 1]
        if ch in _WHITESPACE:
            pos += 1
        elif ch == b"#":
            eol = data.find(b"\n", pos)
            if eol < 0:
                raise MalformedHeaderError("unterminated header comment")
            pos = eol + 1
        elif ch.isdigit():
            start = pos
            while pos < n and data[pos : pos + 1].isdigit():
                pos += 1
            fields.append(int(data[start:pos]))
        else:
            raise MalformedHeaderError(f"unexpected byte {ch!r} in header at offset {pos}")
    # exactly one whitespace byte separates the last field from the raster
    if pos >= n or data[pos : pos + 1] not in _WHITESPACE:
        raise MalformedHeaderError("missing whitespace after header")
    return fields, pos + 1


def read_pgm(data: bytes) -> GrayImage:
    (width, height, maxval), offset = _parse_header(bytes(data), b"P5", 3)
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"invalid dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedMaxvalError(f"only maxval 255 is supported, got {maxval}")
    need = width * height
    raster = data[offset : offset + need]
    if len(raster) < need:
        raise TruncatedDataError(f"expected {need} pixel bytes, found {len(raster)}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()
    return GrayImage(pixels)


def write_pgm(img: GrayImage) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(img.pixels, dtype=np.uint8).tobytes()


def read_pbm(data: bytes) -> BitImage:
    (width, height), offset = _parse_header(bytes(data), b"P4", 2)
    stride = (width + 7) // 8
    need = stride * height
    raster = data[offset : offset + need]
    if len(raster) < need:
        raise TruncatedDataError(f"expected {need} raster bytes, found {len(raster)}")
    packed = np.frombuffer(raster, dtype=np.uint8).reshape(height, stride)
    bits = np.unpackbits(packed, axis=1)[:, :width]
    return BitImage(bits)


def write_pbm(img: BitImage) -> bytes:
    header = f"P4\n{img.width} {img.height}\n".encode("ascii")
    return header + np.packbits(img.bits, axis=1).tobytes()


def load_pgm(path) -> GrayImage:
    return read_pgm(Path(path).read_bytes())


def save_pgm(path, img: GrayImage) -> None:
    Path(path).write_bytes(write_pgm(img))


def load_pbm(path) -> BitImage:
    return read_pbm(Path(path).read_bytes())


def save_pbm(path, img: BitImage) -> None:
    Path(path).write_bytes(write_pbm(img))
