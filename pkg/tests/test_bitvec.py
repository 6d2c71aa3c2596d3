import random

import pytest

from gcsa.bitvec import GAP, PLAIN, RUNLENGTH, BitVector, op_counter
from gcsa.errors import FormatError, InputError

ENCODINGS = [PLAIN, GAP, RUNLENGTH]


class NaiveBits:
    """Linear-scan oracle over a plain Python bit list (1-based)."""

    def __init__(self, bits):
        self.bits = list(bits)

    def rank1(self, i):
        return sum(self.bits[:i])

    def select1(self, j):
        seen = 0
        for idx, b in enumerate(self.bits, start=1):
            seen += b
            if b and seen == j:
                return idx
        raise AssertionError("select out of range")


def random_bits(rng, n, density):
    return [1 if rng.random() < density else 0 for _ in range(n)]


@pytest.mark.parametrize("encoding", ENCODINGS)
def test_rank_trivial_examples(encoding):
    bv = BitVector.from_bits([1, 0, 1, 0, 0, 1], encoding=encoding)
    assert bv.rank1(6) == 3
    assert bv.rank1(0) == 0
    zeros = BitVector.from_bits([0] * 10, encoding=encoding)
    assert zeros.rank1(10) == 0


@pytest.mark.parametrize("encoding", ENCODINGS)
def test_select_trivial_examples(encoding):
    bv = BitVector.from_bits([1, 0, 1, 0, 0, 1], encoding=encoding)
    assert bv.select1(2) == 3
    single = BitVector.from_positions([7], universe=12, encoding=encoding)
    assert single.select1(1) == 7


@pytest.mark.parametrize("encoding", ENCODINGS)
def test_access_examples(encoding):
    bv = BitVector.from_bits([1, 0, 1, 0, 0, 1], encoding=encoding)
    assert bv.access(1) == 1
    assert bv.access(2) == 0
    for i in range(1, 7):
        assert bv.access(i) == bv.rank1(i) - bv.rank1(i - 1)


@pytest.mark.parametrize("encoding", ENCODINGS)
def test_out_of_bounds_errors(encoding):
    bv = BitVector.from_bits([1, 0, 1], encoding=encoding)
    with pytest.raises(InputError):
        bv.rank1(4)
    with pytest.raises(InputError):
        bv.select1(0)
    with pytest.raises(InputError):
        bv.select1(3)
    with pytest.raises(InputError):
        bv.access(0)


@pytest.mark.parametrize("encoding", ENCODINGS)
def test_rank_matches_naive_scan_on_random_vector(encoding):
    rng = random.Random(1)
    bits = random_bits(rng, 1000, 0.3)
    bv = BitVector.from_bits(bits, encoding=encoding)
    oracle = NaiveBits(bits)
    assert bv.rank1(500) == oracle.rank1(500)
    for i in range(0, 1001, 37):
        assert bv.rank1(i) == oracle.rank1(i)


@pytest.mark.parametrize("encoding", ENCODINGS)
@pytest.mark.parametrize("density", [0.001, 0.05, 0.5, 0.95, 0.999])
def test_full_duality_fuzz(encoding, density):
    rng = random.Random(int(density * 10000))
    for n in (1, 7, 64, 255, 256, 257, 1500):
        bits = random_bits(rng, n, density)
        bv = BitVector.from_bits(bits, encoding=encoding)
        oracle = NaiveBits(bits)
        ones = sum(bits)
        assert bv.ones == ones
        assert bv.rank1(n) == ones
        for j in range(1, ones + 1):
            p = bv.select1(j)
            assert p == oracle.select1(j)
            assert bv.rank1(p) == j
        for i in range(0, n + 1):
            r = bv.rank1(i)
            assert r == oracle.rank1(i)
            if r >= 1:
                assert bv.select1(r) <= i


@pytest.mark.parametrize("encoding", ENCODINGS)
def test_pred_succ_fuzz(encoding):
    rng = random.Random(99)
    for density in (0.01, 0.4, 0.9):
        bits = random_bits(rng, 400, density)
        bv = BitVector.from_bits(bits, encoding=encoding)
        positions = [i for i, b in enumerate(bits, start=1) if b]
        for i in range(0, 401):
            expect_pred = None
            for p in positions:
                if p <= i:
                    expect_pred = p
            got = bv.pred1(i)
            if expect_pred is None:
                assert got is None
            else:
                assert got == (expect_pred, positions.index(expect_pred) + 1)
        for i in range(1, 402):
            expect_succ = None
            for p in positions:
                if p >= i:
                    expect_succ = p
                    break
            got = bv.succ1(i)
            if expect_succ is None:
                assert got is None
            else:
                assert got == (expect_succ, positions.index(expect_succ) + 1)


def test_encodings_are_interchangeable():
    rng = random.Random(5)
    for density in (0.001, 0.1, 0.6, 0.999):
        bits = random_bits(rng, 700, density)
        vecs = [BitVector.from_bits(bits, encoding=e) for e in ENCODINGS]
        ones = sum(bits)
        for i in range(0, 701, 13):
            assert len({v.rank1(i) for v in vecs}) == 1
        for j in range(1, ones + 1, 7):
            assert len({v.select1(j) for v in vecs}) == 1
        for i in range(1, 701, 11):
            assert len({v.access(i) for v in vecs}) == 1


@pytest.mark.parametrize("encoding", ENCODINGS)
def test_round_trip_decode(encoding):
    rng = random.Random(17)
    for density in (0.001, 0.25, 0.999):
        bits = random_bits(rng, 300, density)
        bv = BitVector.from_bits(bits, encoding=encoding)
        assert bv.bits() == bits


@pytest.mark.parametrize("encoding", ENCODINGS)
def test_small_block_sizes_stress_boundaries(encoding):
    rng = random.Random(23)
    bits = random_bits(rng, 512, 0.5)
    oracle = NaiveBits(bits)
    for block_size in (1, 2, 4, 32):
        bv = BitVector.from_bits(bits, encoding=encoding, block_size=block_size)
        for i in range(0, 513, 3):
            assert bv.rank1(i) == oracle.rank1(i)
        for j in range(1, bv.ones + 1, 5):
            assert bv.select1(j) == oracle.select1(j)


@pytest.mark.parametrize("encoding", ENCODINGS)
def test_serialization_round_trip(encoding):
    rng = random.Random(7)
    bits = random_bits(rng, 900, 0.2)
    bv = BitVector.from_bits(bits, encoding=encoding)
    data = bv.to_bytes()
    again, offset = BitVector.from_bytes(data)
    assert offset == len(data)
    assert again == bv
    assert again.to_bytes() == data
    assert again.bits() == bits


def test_serialization_rejects_garbage():
    bv = BitVector.from_bits([1, 0, 1], encoding=GAP)
    data = bytearray(bv.to_bytes())
    data[0] = 9  # bad encoding tag
    with pytest.raises(FormatError):
        BitVector.from_bytes(bytes(data))
    with pytest.raises(FormatError):
        BitVector.from_bytes(b"\x01")
    good = bv.to_bytes()
    with pytest.raises(FormatError):
        BitVector.from_bytes(good[:-1])


def test_empty_and_degenerate_vectors():
    for encoding in ENCODINGS:
        empty = BitVector.from_positions([], universe=0, encoding=encoding)
        assert empty.rank1(0) == 0
        allzero = BitVector.from_positions([], universe=64, encoding=encoding)
        assert allzero.rank1(64) == 0
        assert allzero.pred1(64) is None
        assert allzero.succ1(1) is None
        allone = BitVector.from_positions(list(range(1, 65)), universe=64,
                                          encoding=encoding)
        assert allone.rank1(64) == 64
        assert allone.select1(64) == 64


def test_op_counter_counts_primitives():
    bv = BitVector.from_bits([1, 0, 1, 1], encoding=PLAIN)
    op_counter.reset()
    bv.rank1(4)
    bv.select1(1)
    bv.access(2)
    bv.pred1(3)
    bv.succ1(1)
    assert op_counter.count == 5


def test_construction_validates_input():
    with pytest.raises(InputError):
        BitVector.from_positions([3, 2], universe=5)
    with pytest.raises(InputError):
        BitVector.from_positions([9], universe=5)
    with pytest.raises(InputError):
        BitVector.from_bits([1], encoding="bogus")
