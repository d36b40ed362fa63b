"""One-level 2-D integer Haar (S-transform) lifting with perfect reconstruction.

Row pass then column pass; each pair ``(x0, x1)`` maps to
``d = x1 - x0, s = x0 + floor(d / 2)``. Low-pass halves go left/top, so the
coefficient plane is laid out as::

    +----+----+
    | LL | HL |
    +----+----+
    | LH | HH |
    +----+----+
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from iwtwm._backend import kernels
from iwtwm.pixel_io import GrayImage

__all__ = [
    "DimensionError",
    "Subband",
    "EMBED_SUBBANDS",
    "CoeffPlane",
    "forward_iwt",
    "inverse_iwt",
]


class DimensionError(ValueError):
    """Raised for images or planes with odd (or zero) dimensions."""


class Subband(enum.Enum):
    LL = "LL"
    LH = "LH"
    HL = "HL"
    HH = "HH"


EMBED_SUBBANDS = (Subband.LH, Subband.HL, Subband.HH)

# (row half, column half) of each quadrant: 0 = top/left, 1 = bottom/right
_QUADRANT = {
    Subband.LL: (0, 0),
    Subband.HL: (0, 1),
    Subband.LH: (1, 0),
    Subband.HH: (1, 1),
}


def _check_even(shape):
    h, w = shape
    if h < 2 or w < 2 or h % 2 or w % 2:
        raise DimensionError(f"dimensions must be even and non-zero, got {w}x{h}")


@dataclass(eq=False)
class CoeffPlane:
    """Signed integer wavelet coefficients, int64, shape (height, width)."""

    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.int64)
        if self.data.ndim != 2:
            raise DimensionError("coefficient plane must be 2-D")
        _check_even(self.data.shape)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    def band(self, which: Subband) -> np.ndarray:
        """Writable view of one quadrant."""
        hh, hw = self.height // 2, self.width // 2
        r, c = _QUADRANT[which]
        return self.data[r * hh : (r + 1) * hh, c * hw : (c + 1) * hw]

    def copy(self) -> "CoeffPlane":
        return CoeffPlane(self.data.copy())

    def __eq__(self, other):
        if not isinstance(other, CoeffPlane):
            return NotImplemented
        return np.array_equal(self.data, other.data)


def forward_iwt(img) -> CoeffPlane:
    """Forward transform of a GrayImage or any 2-D integer array."""
    x = img.pixels if isinstance(img, GrayImage) else np.asarray(img)
    if x.ndim != 2:
        raise DimensionError("input must be 2-D")
    _check_even(x.shape)
    return CoeffPlane(kernels.forward_lift(x.astype(np.int64, copy=False)))


def inverse_iwt(plane) -> np.ndarray:
    """Inverse transform; returns a signed int64 array that may fall outside [0, 255]."""
    c = plane.data if isinstance(plane, CoeffPlane) else np.asarray(plane, dtype=np.int64)
    _check_even(c.shape)
    return kernels.inverse_lift(c)
