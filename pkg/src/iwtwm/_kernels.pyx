# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: lifting transform and per-segment embed/extract loops.

Right shift of a negative int64 is arithmetic on every supported compiler,
so ``v >> 1`` is floor(v / 2).
"""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64
ctypedef cnp.uint8_t u8

cnp.import_array()


def forward_lift(x):
    cdef i64[:, ::1] src = np.ascontiguousarray(x, dtype=np.int64)
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1]
    cdef Py_ssize_t hh = h // 2, hw = w // 2, i, j
    cdef i64 d
    out_arr = np.empty((h, w), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef i64[::1] r0, r1, o_s, o_d
    with nogil:
        for i in range(hh):
            r0 = src[2 * i]
            r1 = src[2 * i + 1]
            o_s = out[i]
            o_d = out[hh + i]
            # row pass for both rows of the pair, then the column step in place
            for j in range(hw):
                d = r0[2 * j + 1] - r0[2 * j]
                o_s[j] = r0[2 * j] + (d >> 1)
                o_s[hw + j] = d
                d = r1[2 * j + 1] - r1[2 * j]
                o_d[j] = r1[2 * j] + (d >> 1)
                o_d[hw + j] = d
            for j in range(w):
                d = o_d[j] - o_s[j]
                o_s[j] = o_s[j] + (d >> 1)
                o_d[j] = d
    return out_arr


def inverse_lift(c):
    cdef i64[:, ::1] src = np.ascontiguousarray(c, dtype=np.int64)
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1]
    cdef Py_ssize_t hh = h // 2, hw = w // 2, i, j
    cdef i64 x0, d
    out_arr = np.empty((h, w), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef i64[:, ::1] tmp = np.empty((2, w), dtype=np.int64)
    cdef i64[::1] c_s, c_d, t0, t1, o0, o1
    t0 = tmp[0]
    t1 = tmp[1]
    with nogil:
        for i in range(hh):
            c_s = src[i]
            c_d = src[hh + i]
            o0 = out[2 * i]
            o1 = out[2 * i + 1]
            # undo the column step into scratch rows, then the row step into out
            for j in range(w):
                x0 = c_s[j] - (c_d[j] >> 1)
                t0[j] = x0
                t1[j] = x0 + c_d[j]
            for j in range(hw):
                d = t0[hw + j]
                x0 = t0[j] - (d >> 1)
                o0[2 * j] = x0
                o0[2 * j + 1] = x0 + d
                d = t1[hw + j]
                x0 = t1[j] - (d >> 1)
                o1[2 * j] = x0
                o1[2 * j + 1] = x0 + d
    return out_arr


def embed_segment(i64[:, :] band, const u8[::1] bits, u8[::1] tkey_out, int iteration):
    cdef Py_ssize_t n = bits.shape[0], w = band.shape[1], k = 0, r, col, m
    cdef i64 step = 2 if iteration == 1 else -2
    cdef u8 q
    if n > band.shape[0] * w or tkey_out.shape[0] < n:
        raise ValueError("segment does not fit the band")
    with nogil:
        r = 0
        while k < n:
            m = w if n - k > w else n - k
            for col in range(m):
                q = (band[r, col] >> 1) & 1
                tkey_out[k + col] = q
                if q != bits[k + col]:
                    band[r, col] += step
            k += m
            r += 1


def extract_segment(i64[:, :] band, const u8[::1] tkey, u8[::1] bits_out, int iteration):
    cdef Py_ssize_t n = tkey.shape[0], w = band.shape[1], k = 0, r, col, m
    cdef i64 step = -2 if iteration == 1 else 2
    cdef u8 q
    if n > band.shape[0] * w or bits_out.shape[0] < n:
        raise ValueError("segment does not fit the band")
    with nogil:
        r = 0
        while k < n:
            m = w if n - k > w else n - k
            for col in range(m):
                q = (band[r, col] >> 1) & 1
                bits_out[k + col] = q
                if q != tkey[k + col]:
                    band[r, col] += step
            k += m
            r += 1
