"""Reversible image watermarking in the integer wavelet domain.

Two payload bits per LH/HL/HH coefficient of a one-level integer Haar
transform, with the second pass compensating first-pass changes. Cover and
watermark are both restored bit-exactly given the side-information key.
"""
from iwtwm._backend import NAME as BACKEND
from iwtwm.iwt import CoeffPlane, DimensionError, Subband, forward_iwt, inverse_iwt
from iwtwm.metrics import capacity_bpp, emit_csv, psnr, sweep
from iwtwm.pipeline import (
    LedgerRecord,
    SideInfo,
    clamp_and_ledger,
    embed_image,
    extract_image,
    extract_watermark,
)
from iwtwm.pixel_io import BitImage, GrayImage, read_pbm, read_pgm, write_pbm, write_pgm
from iwtwm.sideinfo import decode_key, encode_key
from iwtwm.wm_core import CapacityError, build_plan, embed_bit, embed_pair, extract_bit, qmap

__version__ = "0.1.0"
