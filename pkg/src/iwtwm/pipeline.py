"""End-to-end embed and extract.

Embedding: forward IWT, two-pass coefficient embedding, inverse IWT, then
clamp to [0, 255] while recording every clamped pixel with its unclamped value.
Extraction: put the recorded values back, forward IWT, undo the slots in
reverse order, inverse IWT.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from iwtwm.iwt import forward_iwt, inverse_iwt
from iwtwm.pixel_io import BitImage, GrayImage
from iwtwm.wm_core import build_plan, embed_plane, extract_plane, read_plane

__all__ = [
    "LedgerRecord",
    "SideInfo",
    "SideInfoError",
    "ExtractionError",
    "clamp_and_ledger",
    "restore_ledger",
    "embed_image",
    "extract_image",
    "extract_watermark",
]

INT16_MIN, INT16_MAX = -(2**15), 2**15 - 1


class SideInfoError(ValueError):
    """Side information is internally inconsistent or does not match the image."""


class ExtractionError(ValueError):
    """Extraction produced an impossible cover (usually a mismatched key)."""


class LedgerRecord(NamedTuple):
    row: int
    col: int
    value: int


@dataclass(frozen=True, eq=False)
class SideInfo:
    """Everything extraction needs besides the watermarked image."""

    tracker: np.ndarray
    ledger: tuple[LedgerRecord, ...]
    payload_len: int
    logo_dims: tuple[int, int]
    image_dims: tuple[int, int]

    def __post_init__(self):
        tracker = np.ascontiguousarray(self.tracker, dtype=np.uint8)
        if tracker.ndim != 1:
            raise SideInfoError("tracker must be a flat bit array")
        object.__setattr__(self, "tracker", tracker)
        object.__setattr__(self, "ledger", tuple(LedgerRecord(*map(int, r)) for r in self.ledger))
        object.__setattr__(self, "logo_dims", tuple(int(v) for v in self.logo_dims))
        object.__setattr__(self, "image_dims", tuple(int(v) for v in self.image_dims))
        lw, lh = self.logo_dims
        if not (self.payload_len == len(tracker) == lw * lh):
            raise SideInfoError(
                f"payload_len={self.payload_len}, tracker={len(tracker)} bits, "
                f"logo {lw}x{lh}: these must agree"
            )
        if tracker.size and tracker.max() > 1:
            raise SideInfoError("tracker values must be bits")
        seen = set()
        for rec in self.ledger:
            if 0 <= rec.value <= 255 or not INT16_MIN <= rec.value <= INT16_MAX:
                raise SideInfoError(f"ledger value {rec.value} is not a clamped 16-bit value")
            if rec.row < 0 or rec.col < 0 or (rec.row, rec.col) in seen:
                raise SideInfoError(f"bad or duplicate ledger position ({rec.row}, {rec.col})")
            seen.add((rec.row, rec.col))

    @property
    def key_bits(self) -> int:
        """Information content: tracker plus 80 bits per ledger record."""
        return self.payload_len + 80 * len(self.ledger)

    def __eq__(self, other):
        if not isinstance(other, SideInfo):
            return NotImplemented
        return (
            np.array_equal(self.tracker, other.tracker)
            and self.ledger == other.ledger
            and self.payload_len == other.payload_len
            and self.logo_dims == other.logo_dims
            and self.image_dims == other.image_dims
        )


def clamp_and_ledger(plane) -> tuple[GrayImage, tuple[LedgerRecord, ...]]:
    """Clamp a signed plane to [0, 255]; record each clamped pixel in row-major order."""
    plane = np.asarray(plane, dtype=np.int64)
    rows, cols = np.nonzero((plane < 0) | (plane > 255))
    values = plane[rows, cols]
    if values.size and (values.min() < INT16_MIN or values.max() > INT16_MAX):
        raise OverflowError("out-of-range pixel does not fit a signed 16-bit ledger record")
    ledger = tuple(LedgerRecord(int(r), int(c), int(v)) for r, c, v in zip(rows, cols, values))
    return GrayImage(np.clip(plane, 0, 255).astype(np.uint8)), ledger


def restore_ledger(img: GrayImage, ledger) -> np.ndarray:
    """Signed working plane with the recorded pre-clamp values put back."""
    plane = img.pixels.astype(np.int64)
    h, w = plane.shape
    for rec in ledger:
        if not (0 <= rec.row < h and 0 <= rec.col < w):
            raise SideInfoError(f"ledger record ({rec.row}, {rec.col}) is outside the {w}x{h} image")
        plane[rec.row, rec.col] = rec.value
    return plane


def _check_side(img: GrayImage, side: SideInfo):
    if side.image_dims != (img.width, img.height):
        raise SideInfoError(
            f"key is for a {side.image_dims[0]}x{side.image_dims[1]} image, "
            f"got {img.width}x{img.height}"
        )


def embed_image(cover: GrayImage, logo: BitImage) -> tuple[GrayImage, SideInfo]:
    payload = logo.flatten()
    plane = forward_iwt(cover)
    plan = build_plan(cover.width, cover.height, len(payload))
    tracker = embed_plane(plane, payload, plan)
    watermarked, ledger = clamp_and_ledger(inverse_iwt(plane))
    side = SideInfo(
        tracker=tracker,
        ledger=ledger,
        payload_len=len(payload),
        logo_dims=(logo.width, logo.height),
        image_dims=(cover.width, cover.height),
    )
    return watermarked, side


def extract_image(watermarked: GrayImage, side: SideInfo) -> tuple[GrayImage, BitImage]:
    """Recover the exact cover and logo."""
    _check_side(watermarked, side)
    plane = forward_iwt(restore_ledger(watermarked, side.ledger))
    plan = build_plan(watermarked.width, watermarked.height, side.payload_len)
    payload = extract_plane(plane, side.tracker, plan)
    recovered = inverse_iwt(plane)
    if recovered.min() < 0 or recovered.max() > 255:
        raise ExtractionError("recovered cover has out-of-range pixels; key does not match image")
    lw, lh = side.logo_dims
    return GrayImage(recovered.astype(np.uint8)), BitImage.from_bits(payload, lw, lh)


def extract_watermark(watermarked: GrayImage, side: SideInfo) -> BitImage:
    """Logo only, read directly from the coefficients without undoing any change."""
    _check_side(watermarked, side)
    plane = forward_iwt(restore_ledger(watermarked, side.ledger))
    plan = build_plan(watermarked.width, watermarked.height, side.payload_len)
    lw, lh = side.logo_dims
    return BitImage.from_bits(read_plane(plane, side.tracker, plan), lw, lh)
