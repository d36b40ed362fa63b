"""PSNR, capacity, and the capacity-distortion sweep."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from iwtwm.pipeline import embed_image, extract_image
from iwtwm.pixel_io import BitImage, GrayImage
from iwtwm.sideinfo import encode_key
from iwtwm.wm_core import CapacityError, max_capacity

__all__ = [
    "CSV_HEADER",
    "RoundTripError",
    "SweepRow",
    "psnr",
    "capacity_bpp",
    "payload_bits_for",
    "random_payload",
    "sweep",
    "average_rows",
    "emit_csv",
]

CSV_HEADER = "bpp,psnr_db,payload_bits,ledger_count,key_bytes"


class RoundTripError(AssertionError):
    """Embed followed by extract did not reproduce the inputs."""


@dataclass(frozen=True)
class SweepRow:
    bpp: float
    psnr_db: float
    payload_bits: int
    ledger_count: int
    key_bytes: int
    ones_fraction: float = float("nan")
    verified: bool = True


def psnr(a: GrayImage, b: GrayImage) -> float:
    """Peak signal-to-noise ratio in dB; ``inf`` for identical images."""
    if a.pixels.shape != b.pixels.shape:
        raise ValueError(f"dimension mismatch: {a.width}x{a.height} vs {b.width}x{b.height}")
    diff = a.pixels.astype(np.int64) - b.pixels.astype(np.int64)
    mse = float(np.mean(diff * diff))
    if mse == 0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)


def capacity_bpp(payload_bits: int, width: int, height: int) -> Fraction:
    area = width * height
    if area <= 0:
        raise ValueError("image area must be positive")
    return Fraction(payload_bits, area)


def payload_bits_for(bpp, width: int, height: int) -> int:
    """floor(bpp * area), computed exactly from the decimal value of ``bpp``."""
    return math.floor(Fraction(str(bpp)) * width * height)


def random_payload(n: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).integers(0, 2, size=n, dtype=np.uint8)


def sweep(cover: GrayImage, bpp_list, seed: int) -> list[SweepRow]:
    """Embed seeded random payloads at each BPP, verify the round trip, and measure.

    All rows draw prefixes of one seeded bitstream, so payloads are nested.
    """
    w, h = cover.width, cover.height
    counts = [payload_bits_for(b, w, h) for b in bpp_list]
    cap = max_capacity(w, h)
    for n in counts:
        if n > cap:
            raise CapacityError(n, cap)
    stream = random_payload(max(counts, default=0), seed)

    rows = []
    for n in counts:
        bits = stream[:n]
        logo = BitImage(bits.reshape(1, n))
        marked, side = embed_image(cover, logo)
        recovered, logo_out = extract_image(marked, side)
        if recovered != cover or logo_out != logo:
            raise RoundTripError(f"round trip failed at {n} bits")
        rows.append(
            SweepRow(
                bpp=float(capacity_bpp(n, w, h)),
                psnr_db=psnr(cover, marked),
                payload_bits=n,
                ledger_count=len(side.ledger),
                key_bytes=len(encode_key(side)),
                ones_fraction=float(bits.mean()) if n else float("nan"),
            )
        )
    return rows


def average_rows(per_image: list[list[SweepRow]]) -> list[SweepRow]:
    """Point-wise average across images, as in a per-dataset table."""
    out = []
    for group in zip(*per_image):
        psnrs = [r.psnr_db for r in group]
        out.append(
            SweepRow(
                bpp=float(np.mean([r.bpp for r in group])),
                psnr_db=math.inf if any(math.isinf(p) for p in psnrs) else float(np.mean(psnrs)),
                payload_bits=round(np.mean([r.payload_bits for r in group])),
                ledger_count=round(np.mean([r.ledger_count for r in group])),
                key_bytes=round(np.mean([r.key_bytes for r in group])),
                ones_fraction=float(np.mean([r.ones_fraction for r in group])),
                verified=all(r.verified for r in group),
            )
        )
    return out


def _fmt_psnr(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:.2f}"


def emit_csv(rows, labels=None) -> bytes:
    """CSV bytes; with ``labels`` a leading ``image`` column is added."""
    buf = io.StringIO()
    buf.write(("image," if labels is not None else "") + CSV_HEADER + "\n")
    for i, r in enumerate(rows):
        if labels is not None:
            buf.write(f"{labels[i]},")
        buf.write(f"{r.bpp:.2f},{_fmt_psnr(r.psnr_db)},{r.payload_bits},{r.ledger_count},{r.key_bytes}\n")
    return buf.getvalue().encode("ascii")
