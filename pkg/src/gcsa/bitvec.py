"""Succinct bit vectors with rank/select in three encodings.

Encodings:
  plain       bit-packed bytes; good general default
  gap         byte-aligned LEB128 deltas of 1-positions; for sparse vectors
  run-length  LEB128 (zero-run, one-run) pairs; for vectors of long 1-runs

All positions are 1-based and queries address the closed prefix [1, i].
A block directory samples one anchor per payload block (default 32 bytes);
queries binary-search the directory and scan a single block, so every
public primitive (rank1, select1, access, pred1, succ1) costs one
directory lookup plus one bounded scan. The module-level ``op_counter``
counts those primitive calls; pred1/succ1 are deliberately single
operations even though they return a (position, rank) pair.

Vectors are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

import os
import struct
from bisect import bisect_left

from .errors import FormatError, InputError

if os.environ.get("GCSA_PURE_PYTHON") == "1":
    from . import _kernels_py as _k
else:
    try:
        from . import _kernels as _k  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _k

KERNEL_BACKEND = _k.BACKEND

PLAIN = "plain"
GAP = "gap"
RUNLENGTH = "run-length"

_ENCODING_TAGS = {PLAIN: 0, GAP: 1, RUNLENGTH: 2}
_TAG_ENCODINGS = {v: k for k, v in _ENCODING_TAGS.items()}

_HEADER = struct.Struct("<BQQI")

DEFAULT_BLOCK_BYTES = 32


class OpCounter:
    """Counts bit-vector primitive calls; used by the operation-budget tests."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def reset(self):
        self.count = 0


op_counter = OpCounter()


def _encode_varint(value, out):
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


class BitVector:
    """Immutable rank/select bit vector over positions 1..universe."""

    __slots__ = ("universe", "ones", "encoding", "block_size", "payload",
                 "_offsets", "_pos", "_cum")

    def __init__(self, universe, ones, encoding, block_size, payload):
        self.universe = universe
        self.ones = ones
        self.encoding = encoding
        self.block_size = block_size
        self.payload = payload
        self._build_directory()

    # -- construction ------------------------------------------------

    @classmethod
    def from_positions(cls, positions, universe, encoding=PLAIN,
                       block_size=DEFAULT_BLOCK_BYTES):
        """Build from a sorted iterable of 1-based 1-positions."""
        positions = list(positions)
        if encoding not in _ENCODING_TAGS:
            raise InputError(f"unknown encoding {encoding!r}")
        if block_size <= 0:
            raise InputError("block_size must be positive")
        prev = 0
        for p in positions:
            if p <= prev or p > universe:
                raise InputError("positions must be strictly increasing "
                                 "within [1, universe]")
            prev = p
        payload = bytearray()
        if encoding == PLAIN:
            payload = bytearray((universe + 7) // 8)
            for p in positions:
                payload[(p - 1) >> 3] |= 1 << ((p - 1) & 7)
        elif encoding == GAP:
            prev = 0
            for p in positions:
                _encode_varint(p - prev, payload)
                prev = p
        else:
            prev = 0
            i = 0
            n = len(positions)
            while i < n:
                start = positions[i]
                j = i + 1
                while j < n and positions[j] == positions[j - 1] + 1:
                    j += 1
                _encode_varint(start - prev - 1, payload)
                _encode_varint(j - i, payload)
                prev = positions[j - 1]
                i = j
        return cls(universe, len(positions), encoding, block_size,
                   bytes(payload))

    @classmethod
    def from_bits(cls, bits, encoding=PLAIN, block_size=DEFAULT_BLOCK_BYTES):
        """Build from an iterable of 0/1 values (position 1 first)."""
        positions = []
        universe = 0
        for b in bits:
            universe += 1
            if b:
                positions.append(universe)
        return cls.from_positions(positions, universe, encoding, block_size)

    def _build_directory(self):
        """Anchor one (offset, position, rank) triple per payload block.

        _pos[b] is the last 1-position before block b for gap payloads and
        the number of bit positions consumed before block b for run-length
        payloads (blocks end on pair boundaries, so that too is the last
        1-position before the block). _cum[b] is the 1-count before block b.
        """
        offsets = [0]
        pos_anchor = [0]
        cum = [0]
        buf = self.payload
        if self.encoding == PLAIN:
            bits_per_block = self.block_size * 8
            total = 0
            nblocks = max(1, (len(buf) + self.block_size - 1) // self.block_size)
            for b in range(1, nblocks):
                off = b * self.block_size
                total += _k.plain_rank(buf, (b - 1) * self.block_size,
                                       bits_per_block)
                offsets.append(off)
                pos_anchor.append(b * bits_per_block)
                cum.append(total)
        elif self.encoding == GAP:
            idx = 0
            pos = 0
            count = 0
            block_start = 0
            end = len(buf)
            while idx < end:
                start = idx
                while idx < end and buf[idx] & 0x80:
                    idx += 1
                idx += 1
                delta = 0
                shift = 0
                for k in range(start, idx):
                    delta |= (buf[k] & 0x7F) << shift
                    shift += 7
                pos += delta
                count += 1
                if idx - block_start >= self.block_size and idx < end:
                    offsets.append(idx)
                    pos_anchor.append(pos)
                    cum.append(count)
                    block_start = idx
        else:
            idx = 0
            pos = 0
            count = 0
            block_start = 0
            end = len(buf)
            while idx < end:
                pair = []
                for _ in range(2):
                    value = 0
                    shift = 0
                    while True:
                        byte = buf[idx]
                        idx += 1
                        value |= (byte & 0x7F) << shift
                        if byte < 0x80:
                            break
                        shift += 7
                    pair.append(value)
                pos += pair[0] + pair[1]
                count += pair[1]
                if idx - block_start >= self.block_size and idx < end:
                    offsets.append(idx)
                    pos_anchor.append(pos)
                    cum.append(count)
                    block_start = idx
        self._offsets = offsets
        self._pos = pos_anchor
        self._cum = cum

    # -- queries -----------------------------------------------------

    def __len__(self):
        return self.universe

    def __eq__(self, other):
        if not isinstance(other, BitVector):
            return NotImplemented
        return (self.encoding == other.encoding
                and self.universe == other.universe
                and self.ones == other.ones
                and self.block_size == other.block_size
                and self.payload == other.payload)

    def __hash__(self):
        return hash((self.encoding, self.universe, self.payload))

    def _rank(self, i):
        if i <= 0:
            return 0
        if i >= self.universe:
            return self.ones
        if self.encoding == PLAIN:
            b = (i - 1) // (self.block_size * 8)
            return self._cum[b] + _k.plain_rank(
                self.payload, self._offsets[b], i - b * self.block_size * 8)
        b = bisect_left(self._pos, i) - 1
        end = self._offsets[b + 1] if b + 1 < len(self._offsets) else len(self.payload)
        scan = _k.gap_scan if self.encoding == GAP else _k.rle_scan
        count, _ = scan(self.payload, self._offsets[b], end, self._pos[b], i)
        return self._cum[b] + count

    def _select(self, j):
        b = bisect_left(self._cum, j) - 1
        jrel = j - self._cum[b]
        off = self._offsets[b]
        if self.encoding == PLAIN:
            bit = _k.plain_select(self.payload, off, jrel)
            return b * self.block_size * 8 + bit + 1
        end = self._offsets[b + 1] if b + 1 < len(self._offsets) else len(self.payload)
        if self.encoding == GAP:
            return _k.gap_select(self.payload, off, self._pos[b], jrel)
        return _k.rle_select(self.payload, off, end, self._pos[b], jrel)

    def rank1(self, i):
        """Number of 1-bits in positions [1, i]; rank1(0) == 0."""
        if i < 0 or i > self.universe:
            raise InputError(f"rank1 position {i} outside [0, {self.universe}]")
        op_counter.count += 1
        return self._rank(i)

    def select1(self, j):
        """1-based position of the j-th 1-bit."""
        if j < 1 or j > self.ones:
            raise InputError(f"select1 rank {j} outside [1, {self.ones}]")
        op_counter.count += 1
        return self._select(j)

    def access(self, i):
        """Bit value at position i."""
        if i < 1 or i > self.universe:
            raise InputError(f"access position {i} outside [1, {self.universe}]")
        op_counter.count += 1
        if self.encoding == PLAIN:
            return (self.payload[(i - 1) >> 3] >> ((i - 1) & 7)) & 1
        b = bisect_left(self._pos, i) - 1
        end = self._offsets[b + 1] if b + 1 < len(self._offsets) else len(self.payload)
        scan = _k.gap_scan if self.encoding == GAP else _k.rle_scan
        _, last = scan(self.payload, self._offsets[b], end, self._pos[b], i)
        return 1 if last == i else 0

    def pred1(self, i):
        """(position, rank) of the last 1-bit at or before i; None if absent."""
        if i < 0 or i > self.universe:
            raise InputError(f"pred1 position {i} outside [0, {self.universe}]")
        op_counter.count += 1
        r = self._rank(i)
        if r == 0:
            return None
        return self._select(r), r

    def succ1(self, i):
        """(position, rank) of the first 1-bit at or after i; None if absent."""
        if i < 1 or i > self.universe + 1:
            raise InputError(f"succ1 position {i} outside [1, {self.universe + 1}]")
        op_counter.count += 1
        r = self._rank(i - 1)
        if r == self.ones:
            return None
        return self._select(r + 1), r + 1

    # -- decoding ----------------------------------------------------

    def positions(self):
        """All 1-positions, ascending (test/debug helper)."""
        return [self._select(j) for j in range(1, self.ones + 1)]

    def bits(self):
        """Full bit list (test/debug helper)."""
        out = [0] * self.universe
        for p in self.positions():
            out[p - 1] = 1
        return out

    # -- serialization -----------------------------------------------

    def to_bytes(self):
        header = _HEADER.pack(_ENCODING_TAGS[self.encoding], self.universe,
                              self.ones, self.block_size)
        return header + self.payload

    @classmethod
    def from_bytes(cls, data, offset=0):
        """Decode one vector; returns (vector, next_offset)."""
        if len(data) - offset < _HEADER.size:
            raise FormatError("truncated bit vector header")
        tag, universe, ones, block_size = _HEADER.unpack_from(data, offset)
        offset += _HEADER.size
        if tag not in _TAG_ENCODINGS:
            raise FormatError(f"unknown bit vector encoding tag {tag}")
        if block_size <= 0:
            raise FormatError("non-positive block size")
        encoding = _TAG_ENCODINGS[tag]
        if encoding == PLAIN:
            nbytes = (universe + 7) // 8
            payload = data[offset:offset + nbytes]
            if len(payload) < nbytes:
                raise FormatError("truncated plain payload")
            offset += nbytes
            bv = cls(universe, ones, encoding, block_size, bytes(payload))
            if bv._rank(universe) != ones:
                raise FormatError("plain payload does not match ones count")
            return bv, offset
        # gap / run-length payloads are self-delimiting given `ones`
        start = offset
        count = 0
        pos = 0
        values_per_one = 1 if encoding == GAP else 2
        pending = 0
        value = 0
        shift = 0
        run = []
        while count < ones:
            if offset >= len(data):
                raise FormatError("truncated encoded payload")
            byte = data[offset]
            offset += 1
            value |= (byte & 0x7F) << shift
            shift += 7
            if byte & 0x80:
                continue
            run.append(value)
            value = 0
            shift = 0
            pending += 1
            if pending == values_per_one:
                if encoding == GAP:
                    pos += run[0]
                    count += 1
                else:
                    pos += run[0] + run[1]
                    count += run[1]
                run = []
                pending = 0
        if pending or count != ones or pos > universe:
            raise FormatError("inconsistent encoded payload")
        return cls(universe, ones, encoding, block_size,
                   bytes(data[start:offset])), offset
