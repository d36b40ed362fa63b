"""Per-coefficient embedding state machine and the payload allocation plan.

Each coefficient in LH, HL and HH can carry two bits. The first pass moves a
coefficient by +2 when its Q bit disagrees with the payload bit, the second
pass by -2, so a second-pass change frequently cancels a first-pass one.
The tracker bit stored for every slot is Q of the coefficient as it was just
before that slot was written, which is what makes extraction exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from iwtwm._backend import kernels
from iwtwm.iwt import EMBED_SUBBANDS, CoeffPlane, DimensionError, Subband

__all__ = [
    "DELTA",
    "CapacityError",
    "qmap",
    "embed_bit",
    "extract_bit",
    "embed_pair",
    "extract_pair",
    "Slot",
    "Segment",
    "AllocationPlan",
    "max_capacity",
    "build_plan",
    "embed_plane",
    "extract_plane",
    "read_plane",
]

DELTA = 2


class CapacityError(ValueError):
    """Payload does not fit; ``maximum`` is the largest accepted bit count."""

    def __init__(self, requested: int, maximum: int):
        super().__init__(f"payload of {requested} bits exceeds maximum capacity of {maximum} bits")
        self.requested = requested
        self.maximum = maximum


def qmap(c: int) -> int:
    """mod(floor(c / 2), 2) with a non-negative remainder."""
    return (c // 2) % 2


def embed_bit(c: int, w: int, iteration: int) -> tuple[int, int]:
    """Write bit ``w`` into coefficient ``c``; returns ``(c_w, tkey_bit)``."""
    if iteration not in (1, 2):
        raise ValueError(f"iteration must be 1 or 2, got {iteration}")
    t = qmap(c)
    if t == w:
        return c, t
    return (c + DELTA if iteration == 1 else c - DELTA), t


def extract_bit(c_w: int, tkey_bit: int, embed_iteration: int) -> tuple[int, int]:
    """Inverse of :func:`embed_bit`; returns ``(w_e, c_r)``."""
    if embed_iteration not in (1, 2):
        raise ValueError(f"iteration must be 1 or 2, got {embed_iteration}")
    w = qmap(c_w)
    if w == tkey_bit:
        return w, c_w
    return w, (c_w - DELTA if embed_iteration == 1 else c_w + DELTA)


def embed_pair(c0: int, a: int, b: int) -> tuple[int, int, int]:
    """Both passes on one coefficient; returns ``(c2, tkey_a, tkey_b)``."""
    c1, ta = embed_bit(c0, a, 1)
    c2, tb = embed_bit(c1, b, 2)
    return c2, ta, tb


def extract_pair(c2: int, tkey_a: int, tkey_b: int) -> tuple[int, int, int]:
    """Second-pass bit comes out first. Returns ``(a, b, c0)``."""
    b, c1 = extract_bit(c2, tkey_b, 2)
    a, c0 = extract_bit(c1, tkey_a, 1)
    return a, b, c0


class Slot(NamedTuple):
    subband: Subband
    row: int
    col: int
    iteration: int


class Segment(NamedTuple):
    """A run of payload bits written to the first ``count`` coefficients of one band."""

    subband: Subband
    iteration: int
    offset: int
    count: int


@dataclass(frozen=True)
class AllocationPlan:
    width: int
    height: int
    segments: tuple[Segment, ...]

    def __len__(self) -> int:
        return sum(s.count for s in self.segments)

    @property
    def band_width(self) -> int:
        return self.width // 2

    def slots(self) -> Iterator[Slot]:
        """Slots in embedding order; payload bit ``i`` goes to the ``i``-th slot."""
        bw = self.band_width
        for seg in self.segments:
            for k in range(seg.count):
                yield Slot(seg.subband, k // bw, k % bw, seg.iteration)

    def __iter__(self):
        return self.slots()


def max_capacity(width: int, height: int) -> int:
    """Two bits per coefficient in each of the three detail bands."""
    return 2 * len(EMBED_SUBBANDS) * (width // 2) * (height // 2)


def build_plan(width: int, height: int, length: int) -> AllocationPlan:
    """Deterministic slot allocation for a ``length``-bit payload.

    The payload is cut into three near-equal contiguous chunks for LH, HL, HH
    (earlier bands take the remainder). Each chunk is halved, first half one
    bit longer when odd; the first half goes to pass 1 over row-major
    coefficients and the second half revisits the same coefficients in pass 2.
    """
    if width < 2 or height < 2 or width % 2 or height % 2:
        raise DimensionError(f"dimensions must be even and non-zero, got {width}x{height}")
    if length < 0:
        raise ValueError("payload length must be non-negative")
    cap = max_capacity(width, height)
    if length > cap:
        raise CapacityError(length, cap)

    q, r = divmod(length, len(EMBED_SUBBANDS))
    segments = []
    offset = 0
    for i, band in enumerate(EMBED_SUBBANDS):
        chunk = q + (1 if i < r else 0)
        first = (chunk + 1) // 2
        for iteration, count in ((1, first), (2, chunk - first)):
            if count:
                segments.append(Segment(band, iteration, offset, count))
                offset += count
    return AllocationPlan(width, height, tuple(segments))


def _as_bits(bits) -> np.ndarray:
    return np.ascontiguousarray(bits, dtype=np.uint8)


def embed_plane(plane: CoeffPlane, payload, plan: AllocationPlan) -> np.ndarray:
    """Embed ``payload`` into ``plane`` in place following ``plan``; returns the tracker key."""
    payload = _as_bits(payload)
    if len(payload) != len(plan):
        raise ValueError(f"payload has {len(payload)} bits, plan has {len(plan)} slots")
    tkey = np.zeros(len(payload), dtype=np.uint8)
    for seg in plan.segments:
        sl = slice(seg.offset, seg.offset + seg.count)
        kernels.embed_segment(plane.band(seg.subband), payload[sl], tkey[sl], seg.iteration)
    return tkey


def extract_plane(plane: CoeffPlane, tkey, plan: AllocationPlan) -> np.ndarray:
    """Walk ``plan`` backwards, restoring ``plane`` in place; returns the payload.

    Slots inside one segment touch distinct coefficients, so reversing the
    segment order is enough to reverse the slot order.
    """
    tkey = _as_bits(tkey)
    if len(tkey) != len(plan):
        raise ValueError(f"tracker key has {len(tkey)} bits, plan has {len(plan)} slots")
    payload = np.zeros(len(tkey), dtype=np.uint8)
    for seg in reversed(plan.segments):
        sl = slice(seg.offset, seg.offset + seg.count)
        kernels.extract_segment(plane.band(seg.subband), tkey[sl], payload[sl], seg.iteration)
    return payload


def read_plane(plane: CoeffPlane, tkey, plan: AllocationPlan) -> np.ndarray:
    """Read the payload without touching ``plane``.

    Pass-2 bits are Q of the final coefficient. A pass-1 bit whose coefficient
    was revisited equals the pass-2 tracker bit of that coefficient (both are
    Q of the intermediate value); a lone pass-1 bit is Q of the final value.
    """
    tkey = _as_bits(tkey)
    if len(tkey) != len(plan):
        raise ValueError(f"tracker key has {len(tkey)} bits, plan has {len(plan)} slots")
    payload = np.zeros(len(tkey), dtype=np.uint8)
    second = {seg.subband: seg for seg in plan.segments if seg.iteration == 2}
    for seg in plan.segments:
        flat = plane.band(seg.subband).reshape(-1)[: seg.count]
        q = ((flat >> 1) & 1).astype(np.uint8)
        out = payload[seg.offset : seg.offset + seg.count]
        out[:] = q
        partner = second.get(seg.subband)
        if seg.iteration == 1 and partner is not None:
            out[: partner.count] = tkey[partner.offset : partner.offset + partner.count]
    return payload
