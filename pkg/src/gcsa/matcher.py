"""Read alignment over the index: exact batches and best-match edit search.

The approximate search is a branch-and-bound backward walk over the index
(substitutions, insertions, and deletions all cost 1, no free ends and no
seed), pruned by a per-prefix lower bound computed from exact-extension
restarts. It returns every match at the smallest achievable distance
within the budget. Sentinel characters never participate in alignments:
a match always pairs the pattern against a run of alphabet characters
along some path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automaton import FINAL_CHAR, INITIAL_CHAR
from .errors import InputError

FORWARD = "forward"
REVERSE = "reverse-complement"

_COMPLEMENT = str.maketrans("ACGT", "TGCA")
_COMPLEMENT_N = str.maketrans("ACGTN", "TGCAN")


def reverse_complement(s):
    """Watson-Crick reverse complement of an ACGT string."""
    for ch in s:
        if ch not in "ACGT":
            raise InputError(f"cannot complement non-DNA character {ch!r}")
    return s.translate(_COMPLEMENT)[::-1]


def _reverse_complement_n(s):
    return s.translate(_COMPLEMENT_N)[::-1]


@dataclass
class MatchResult:
    name: str
    strand: str
    distance: int
    ranges: list
    ids: list

    @property
    def count(self):
        return len(self.ranges)


@dataclass
class ReadBatch:
    reads: list  # (name, sequence) pairs

    @classmethod
    def from_text(cls, text):
        """Parse FASTA or FASTQ (autodetected; qualities ignored)."""
        lines = [ln.rstrip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            return cls([])
        reads = []
        if lines[0].startswith("@"):
            if len(lines) % 4 != 0:
                raise InputError("FASTQ record count is not a multiple of 4")
            for i in range(0, len(lines), 4):
                if not lines[i].startswith("@") or not lines[i + 2].startswith("+"):
                    raise InputError(f"malformed FASTQ record near line {i + 1}")
                reads.append((lines[i][1:].split()[0], lines[i + 1].upper()))
        elif lines[0].startswith(">"):
            name = None
            buf = []
            for ln in lines:
                if ln.startswith(">"):
                    if name is not None:
                        reads.append((name, "".join(buf)))
                    name = ln[1:].split()[0] if len(ln) > 1 else ""
                    buf = []
                else:
                    buf.append(ln.upper())
            if name is not None:
                reads.append((name, "".join(buf)))
        else:
            for i, ln in enumerate(lines):
                reads.append((f"read{i + 1}", ln.upper()))
        return cls(reads)


def _clean(ix, seq):
    """True iff every character is an alphabet letter."""
    letters = ix.alphabet.letters
    return all(ch in letters for ch in seq)


def exact_batch(ix, batch, reverse=True, max_locate=None):
    """Distance-0 matches per read on both strands.

    Reads with out-of-alphabet characters are unmatchable and produce no
    rows. Every node of a hit range is located, up to max_locate per
    result (None: unlimited).
    """
    results = []
    for name, seq in batch.reads:
        for strand, pattern in _strand_patterns(ix, seq, reverse):
            if not pattern or not _clean(ix, pattern):
                continue
            r = ix.find(pattern)
            if r is None:
                continue
            ordinals = list(ix.node_ordinals(r))
            if max_locate is not None:
                ordinals = ordinals[:max_locate]
            ranges = [ix.node_range(o) for o in ordinals]
            ids = [ix.locate(nr) for nr in ranges]
            results.append(MatchResult(name, strand, 0, ranges, ids))
    return results


def _strand_patterns(ix, seq, reverse):
    yield FORWARD, seq
    if reverse and ix.alphabet.letters == "ACGT":
        yield REVERSE, _reverse_complement_n(seq)


def lower_bound_array(ix, pattern):
    """bound[i] = lower bound on edits needed to match pattern[:i].

    Greedy exact-extension restarts: scan left to right, growing the
    longest segment that still occurs along some path (exponential probe
    plus bisection, each probe one backward search); every restart
    certifies one unavoidable edit. bound[0] == 0; index i is a prefix
    length. Admissible for the branch-and-bound search.
    """
    m = len(pattern)
    bound = [0] * (m + 1)
    letters = ix.alphabet.letters

    def occurs(start, stop):
        seg = pattern[start - 1:stop]
        return _clean(ix, seg) and ix.find(seg) is not None

    z = 0
    j = 1  # 1-based start of the current segment
    while j <= m:
        if pattern[j - 1] not in letters or not occurs(j, j):
            bound[j] = z + 1
            z += 1
            j += 1
            continue
        lo = j  # largest known-good exclusive segment end
        step = 1
        while lo + step <= m and occurs(j, lo + step):
            lo += step
            step *= 2
        hi = min(m, lo + step - 1)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if occurs(j, mid):
                lo = mid
            else:
                hi = mid - 1
        for t in range(j, lo + 1):
            bound[t] = z
        if lo >= m:
            break
        # the character after the segment costs an edit; restart past it
        bound[lo + 1] = z + 1
        z += 1
        j = lo + 2
    return bound


def approximate_find(ix, pattern, k, name="", strand=FORWARD,
                     max_locate=None):
    """All nodes matching the pattern at the minimal distance <= k.

    Returns a list with zero or one MatchResult. Characters outside the
    alphabet (for DNA: N) never match and force an edit. max_locate caps
    the located occurrences (None: unlimited).
    """
    if k < 0:
        raise InputError("edit distance budget must be >= 0")
    m = len(pattern)
    if m == 0:
        return []
    codes = []
    letters = ix.alphabet.letters
    for ch in pattern:
        codes.append(ix.alphabet.code(ch) if ch in letters else None)
    bound = lower_bound_array(ix, pattern)
    sigma = ix.alphabet.sigma

    best = k + 1
    hits = {}       # node ordinal -> smallest distance
    seen = {}       # (i, sp, ep) -> smallest edits reaching that state

    stack = [(m, None, 0)]  # (chars of prefix pattern[:i] left, range, edits)
    while stack:
        i, r, e = stack.pop()
        budget = min(k, best)
        if e + bound[i] > budget:
            continue
        key = (i, r.sp if r else 0, r.ep if r else 0)
        prev = seen.get(key)
        if prev is not None and prev <= e:
            continue
        seen[key] = e
        if i == 0:
            # a match must pair the pattern against at least one path
            # character; the all-deleted alignment reports nothing
            if r is not None:
                if e < best:
                    best = e
                for o in ix.node_ordinals(r):
                    if e < hits.get(o, k + 1):
                        hits[o] = e
            continue
        # deletion: pattern character absent from the path
        stack.append((i - 1, r, e + 1))
        for c in range(1, sigma + 1):
            nr = ix._step(r, c) if r is not None else ix._initial_range(c)
            if nr is None:
                continue
            cost = 0 if codes[i - 1] == c else 1
            # match/substitute: consume pattern[i-1] against path char c
            stack.append((i - 1, nr, e + cost))
            # insertion: path char c not present in the pattern
            stack.append((i, nr, e + 1))

    if best > k:
        return []
    ordinals = sorted(o for o, e in hits.items() if e == best)
    if max_locate is not None:
        ordinals = ordinals[:max_locate]
    ranges = [ix.node_range(o) for o in ordinals]
    ids = [ix.locate(nr) for nr in ranges]
    return [MatchResult(name, strand, best, ranges, ids)]


def approximate_batch(ix, batch, k, reverse=True, max_locate=None):
    """Best-match results per read and strand."""
    results = []
    for name, seq in batch.reads:
        for strand, pattern in _strand_patterns(ix, seq, reverse):
            results.extend(approximate_find(ix, pattern, k, name, strand,
                                            max_locate=max_locate))
    return results


def validate_match(ix, r, pattern, distance):
    """Re-check a reported match by decoding path labels from the node.

    Enumerates sentinel-free path prefixes up to len(pattern) + distance
    characters via psi and verifies some non-empty prefix aligns to the
    pattern within the reported distance. Oracle-scale only.
    """
    target = len(pattern) + distance
    best = [None]

    def dp_prefix_min(s):
        # min over non-empty prefixes t of s of edit(pattern, t)
        prev = list(range(len(pattern) + 1))
        out = None
        for ch in s:
            cur = [prev[0] + 1]
            for j in range(1, len(pattern) + 1):
                cost = 0 if pattern[j - 1] == ch else 1
                cur.append(min(prev[j] + 1, cur[j - 1] + 1,
                               prev[j - 1] + cost))
            prev = cur
            out = prev[-1] if out is None else min(out, prev[-1])
        return out

    def walk(rng, s):
        ch = ix.node_label_char(rng)
        if ch in (INITIAL_CHAR, FINAL_CHAR):
            return
        s = s + ch
        d = dp_prefix_min(s)
        if d is not None and (best[0] is None or d < best[0]):
            best[0] = d
        if len(s) >= target:
            return
        for nxt in ix.psi(rng):
            walk(nxt, s)

    walk(r, "")
    return best[0] is not None and best[0] <= distance
