"""Pure-Python block-scan kernels for the succinct bit vectors.

A compiled twin of this module lives in ``gcsa._kernels`` (Cython). Both
expose the same six functions over a byte payload; ``gcsa.bitvec`` picks
whichever is importable. Bit positions inside a block are 0-based here;
the 1-based public convention is handled by the caller.

Payload layouts:
  plain      bits packed LSB-first into bytes
  gap        LEB128 deltas between consecutive 1-positions
  run-length LEB128 pairs (zero-run, one-run); first zero-run may be 0
"""

BACKEND = "python"

_MASKS = [(1 << n) - 1 for n in range(9)]


def plain_rank(buf, off, nbits):
    """Count set bits among the first nbits bits starting at byte off."""
    nbytes = nbits >> 3
    count = int.from_bytes(buf[off:off + nbytes], "little").bit_count()
    rem = nbits & 7
    if rem:
        count += (buf[off + nbytes] & _MASKS[rem]).bit_count()
    return count


def plain_select(buf, off, j):
    """0-based bit index (relative to off) of the j-th set bit, j >= 1.

    Returns -1 if the buffer tail holds fewer than j set bits.
    """
    idx = off
    end = len(buf)
    while idx < end:
        c = buf[idx].bit_count()
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


def _varint(buf, idx):
    value = 0
    shift = 0
    while True:
        byte = buf[idx]
        idx += 1
        value |= (byte & 0x7F) << shift
        if byte < 0x80:
            return value, idx
        shift += 7


def gap_scan(buf, off, end, base_pos, limit):
    """Count 1-positions <= limit inside payload[off:end].

    base_pos is the absolute position of the last 1-bit before the block.
    Returns (count, last) where last is the largest 1-position <= limit
    found in the block, or -1 if the block holds none.
    """
    pos = base_pos
    count = 0
    last = -1
    idx = off
    while idx < end:
        delta, idx = _varint(buf, idx)
        pos += delta
        if pos > limit:
            break
        count += 1
        last = pos
    return count, last


def gap_select(buf, off, base_pos, j):
    """Absolute position of the j-th 1-bit in the block, j >= 1."""
    pos = base_pos
    idx = off
    while j > 0:
        delta, idx = _varint(buf, idx)
        pos += delta
        j -= 1
    return pos


def rle_scan(buf, off, end, base_pos, limit):
    """Count 1-positions <= limit in a run-length block.

    base_pos is the number of bit positions consumed before the block
    (blocks end on run-pair boundaries, so it is also the last 1-position
    before the block). Returns (count, last) like gap_scan.
    """
    pos = base_pos
    count = 0
    last = -1
    idx = off
    while idx < end and pos < limit:
        zeros, idx = _varint(buf, idx)
        ones, idx = _varint(buf, idx)
        pos += zeros
        if pos >= limit:
            break
        take = ones if pos + ones <= limit else limit - pos
        if take > 0:
            count += take
            last = pos + take
        pos += ones
    return count, last


def rle_select(buf, off, end, base_pos, j):
    """Absolute position of the j-th 1-bit in a run-length block, j >= 1."""
    pos = base_pos
    idx = off
    while idx < end:
        zeros, idx = _varint(buf, idx)
        ones, idx = _varint(buf, idx)
        pos += zeros
        if j <= ones:
            return pos + j
        j -= ones
        pos += ones
    return -1
