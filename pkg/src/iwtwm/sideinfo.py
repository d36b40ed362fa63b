"""Key file codec for :class:`~iwtwm.pipeline.SideInfo`.

Layout, all integers big-endian::

    "RWM1"  version:u8
    image_w:u32 image_h:u32 logo_w:u32 logo_h:u32
    payload_len:u64 ledger_count:u32
    ledger_count x (row:u32 col:u32 value:i16)
    tracker bits, MSB first, zero-padded to a byte
    crc32:u32   (over every preceding byte)
"""
import struct
import zlib

import numpy as np

from iwtwm.pipeline import LedgerRecord, SideInfo, SideInfoError

__all__ = [
    "MAGIC",
    "VERSION",
    "KeyFormatError",
    "BadMagicError",
    "UnsupportedVersionError",
    "ChecksumError",
    "TruncatedKeyError",
    "KeyInvariantError",
    "encode_key",
    "decode_key",
]

MAGIC = b"RWM1"
VERSION = 1

_HEAD = struct.Struct(">4sBIIIIQI")
_RECORD = struct.Struct(">IIh")
_CRC = struct.Struct(">I")
MIN_SIZE = _HEAD.size + _CRC.size


class KeyFormatError(ValueError):
    pass


class BadMagicError(KeyFormatError):
    pass


class UnsupportedVersionError(KeyFormatError):
    pass


class ChecksumError(KeyFormatError):
    pass


class TruncatedKeyError(KeyFormatError):
    pass


class KeyInvariantError(KeyFormatError):
    pass


def encode_key(side: SideInfo) -> bytes:
    iw, ih = side.image_dims
    lw, lh = side.logo_dims
    parts = [_HEAD.pack(MAGIC, VERSION, iw, ih, lw, lh, side.payload_len, len(side.ledger))]
    parts.extend(_RECORD.pack(r.row, r.col, r.value) for r in side.ledger)
    parts.append(np.packbits(side.tracker).tobytes())
    body = b"".join(parts)
    return body + _CRC.pack(zlib.crc32(body))


def decode_key(data: bytes) -> SideInfo:
    data = bytes(data)
    if len(data) < MIN_SIZE:
        raise TruncatedKeyError(f"key file is {len(data)} bytes, minimum is {MIN_SIZE}")
    if data[:4] != MAGIC:
        raise BadMagicError(f"bad magic {data[:4]!r}")
    if data[4] != VERSION:
        raise UnsupportedVersionError(f"unsupported key version {data[4]}")
    body, (crc,) = data[:-4], _CRC.unpack(data[-4:])
    if zlib.crc32(body) != crc:
        raise ChecksumError("key checksum mismatch")

    _, _, iw, ih, lw, lh, payload_len, count = _HEAD.unpack_from(body)
    tracker_bytes = -(-payload_len // 8)
    expected = _HEAD.size + count * _RECORD.size + tracker_bytes
    if len(body) < expected:
        raise TruncatedKeyError(f"key declares {expected} body bytes, found {len(body)}")
    if len(body) > expected:
        raise KeyFormatError(f"{len(body) - expected} unexpected trailing bytes")

    pos = _HEAD.size
    ledger = [LedgerRecord(*_RECORD.unpack_from(body, pos + i * _RECORD.size)) for i in range(count)]
    pos += count * _RECORD.size
    packed = np.frombuffer(body, dtype=np.uint8, count=tracker_bytes, offset=pos)
    bits = np.unpackbits(packed)
    if bits[payload_len:].any():
        raise KeyInvariantError("non-zero padding after tracker bits")
    try:
        return SideInfo(
            tracker=bits[:payload_len],
            ledger=tuple(ledger),
            payload_len=payload_len,
            logo_dims=(lw, lh),
            image_dims=(iw, ih),
        )
    except SideInfoError as exc:
        raise KeyInvariantError(str(exc)) from exc
