# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled block-scan kernels; mirrors gcsa._kernels_py exactly."""

from libc.stdint cimport int64_t, uint64_t

BACKEND = "cython"

cdef int _POPCOUNT8[256]
cdef int _i
for _i in range(256):
    _POPCOUNT8[_i] = bin(_i).count("1")


def plain_rank(const unsigned char[::1] buf, Py_ssize_t off, Py_ssize_t nbits):
    cdef Py_ssize_t nbytes = nbits >> 3
    cdef Py_ssize_t i
    cdef int64_t count = 0
    for i in range(nbytes):
        count += _POPCOUNT8[buf[off + i]]
    cdef int rem = nbits & 7
    if rem:
        count += _POPCOUNT8[buf[off + nbytes] & ((1 << rem) - 1)]
    return count


def plain_select(const unsigned char[::1] buf, Py_ssize_t off, int64_t j):
    cdef Py_ssize_t idx = off
    cdef Py_ssize_t end = buf.shape[0]
    cdef int c, bit
    cdef unsigned char b
    while idx < end:
        c = _POPCOUNT8[buf[idx]]
        if c >= j:
            b = buf[idx]
            bit = 0
            while True:
                if b & 1:
                    j -= 1
                    if j == 0:
                        return (idx - off) * 8 + bit
                b >>= 1
                bit += 1
        j -= c
        idx += 1
    return -1


cdef inline uint64_t _varint(const unsigned char[::1] buf, Py_ssize_t *idx):
    cdef uint64_t value = 0
    cdef int shift = 0
    cdef unsigned char byte
    while True:
        byte = buf[idx[0]]
        idx[0] += 1
        value |= (<uint64_t> (byte & 0x7F)) << shift
        if byte < 0x80:
            return value
        shift += 7


def gap_scan(const unsigned char[::1] buf, Py_ssize_t off, Py_ssize_t end,
             int64_t base_pos, int64_t limit):
    cdef int64_t pos = base_pos
    cdef int64_t count = 0
    cdef int64_t last = -1
    cdef Py_ssize_t idx = off
    while idx < end:
        pos += <int64_t> _varint(buf, &idx)
        if pos > limit:
            break
        count += 1
        last = pos
    return count, last


def gap_select(const unsigned char[::1] buf, Py_ssize_t off,
               int64_t base_pos, int64_t j):
    cdef int64_t pos = base_pos
    cdef Py_ssize_t idx = off
    while j > 0:
        pos += <int64_t> _varint(buf, &idx)
        j -= 1
    return pos


def rle_scan(const unsigned char[::1] buf, Py_ssize_t off, Py_ssize_t end,
             int64_t base_pos, int64_t limit):
    cdef int64_t pos = base_pos
    cdef int64_t count = 0
    cdef int64_t last = -1
    cdef int64_t zeros, ones, take
    cdef Py_ssize_t idx = off
    while idx < end and pos < limit:
        zeros = <int64_t> _varint(buf, &idx)
        ones = <int64_t> _varint(buf, &idx)
        pos += zeros
        if pos >= limit:
            break
        take = ones if pos + ones <= limit else limit - pos
        if take > 0:
            count += take
            last = pos + take
        pos += ones
    return count, last


def rle_select(const unsigned char[::1] buf, Py_ssize_t off, Py_ssize_t end,
               int64_t base_pos, int64_t j):
    cdef int64_t pos = base_pos
    cdef int64_t zeros, ones
    cdef Py_ssize_t idx = off
    while idx < end:
        zeros = <int64_t> _varint(buf, &idx)
        ones = <int64_t> _varint(buf, &idx)
        pos += zeros
        if j <= ones:
            return pos + j
        j -= ones
        pos += ones
    return -1
