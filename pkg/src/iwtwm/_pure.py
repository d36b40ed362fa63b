"""Numpy implementation of the hot kernels; used when the compiled module is absent.

Every function here has a twin in ``_kernels.pyx`` with the same signature and
bit-identical results.
"""
import numpy as np


def forward_lift(x):
    """One-level 2-D S-transform of an even-sized int64 array; returns a new array."""
    x = np.asarray(x, dtype=np.int64)
    d = x[:, 1::2] - x[:, 0::2]
    rows = np.hstack((x[:, 0::2] + (d >> 1), d))
    d = rows[1::2, :] - rows[0::2, :]
    return np.vstack((rows[0::2, :] + (d >> 1), d))


def inverse_lift(c):
    c = np.asarray(c, dtype=np.int64)
    h, w = c.shape
    hh, hw = h // 2, w // 2
    rows = np.empty((h, w), dtype=np.int64)
    s, d = c[:hh, :], c[hh:, :]
    rows[0::2, :] = s - (d >> 1)
    rows[1::2, :] = rows[0::2, :] + d
    out = np.empty((h, w), dtype=np.int64)
    s, d = rows[:, :hw], rows[:, hw:]
    out[:, 0::2] = s - (d >> 1)
    out[:, 1::2] = out[:, 0::2] + d
    return out


def embed_segment(band, bits, tkey_out, iteration):
    """Embed ``bits`` into the first len(bits) row-major coefficients of ``band`` in place."""
    n = len(bits)
    if n == 0:
        return
    if n > band.size:
        raise ValueError("segment does not fit the band")
    rows, cols = np.divmod(np.arange(n), band.shape[1])
    coeffs = band[rows, cols]
    q = (coeffs >> 1) & 1
    tkey_out[:] = q
    step = 2 if iteration == 1 else -2
    band[rows, cols] = coeffs + step * (q != bits)


def extract_segment(band, tkey, bits_out, iteration):
    """Undo ``embed_segment`` in place, writing the recovered bits to ``bits_out``."""
    n = len(tkey)
    if n == 0:
        return
    if n > band.size:
        raise ValueError("segment does not fit the band")
    rows, cols = np.divmod(np.arange(n), band.shape[1])
    coeffs = band[rows, cols]
    q = (coeffs >> 1) & 1
    bits_out[:] = q
    step = -2 if iteration == 1 else 2
    band[rows, cols] = coeffs + step * (q != tkey)
