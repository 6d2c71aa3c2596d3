"""The succinct index: BWT over node ranges of a prefix-range-sorted automaton.

Layout: nodes sit in rank order; node v owns a range of max(in(v), out(v))
slots. The slots hold the labels of v's incoming edges (ascending, at most
one per character thanks to reverse determinism) followed by empty padding.
F marks range starts, M marks out-degrees (the final node carries a single
1-bit for the wraparound edge back to the initial node, whose range in turn
holds the one '$' character of the sequence). C[c] counts edges whose
source label sorts below c, so the c-characters of the sequence and the
M bits align edge-for-edge; that alignment is what LF, Psi, and the
backward search ride on.

Occurrences of each character live in their own bit vector, so every
navigation step is a handful of rank/select calls; `find` spends at most
six per pattern character.

Positions are 1-based. All query state is immutable after construction.
"""

from __future__ import annotations

import struct
import time
from dataclasses import dataclass

from .automaton import FINAL_CHAR, GAP_CHAR, INITIAL_CHAR, Alphabet
from .bitvec import GAP, RUNLENGTH, BitVector
from .errors import FormatError, InputError, InternalError

MAGIC = b"GCSA"
FORMAT_VERSION = 1

DEFAULT_SAMPLE_RATE = 16


@dataclass(frozen=True)
class NodeRange:
    """Inclusive BWT interval [sp, ep] identifying one node."""

    sp: int
    ep: int


def _pack_values(values, width):
    acc = 0
    for i, v in enumerate(values):
        acc |= v << (i * width)
    nbytes = (width * len(values) + 7) // 8
    return acc.to_bytes(nbytes, "little")


def _unpack_values(data, count, width):
    acc = int.from_bytes(data, "little")
    mask = (1 << width) - 1
    return [(acc >> (i * width)) & mask for i in range(count)]


class GcsaIndex:
    """Queryable index over the paths of a prefix-range-sorted automaton."""

    def __init__(self, alphabet, occ, F, M, C, B, samples, sample_rate):
        self.alphabet = alphabet
        self.occ = occ            # {symbol code: BitVector}, codes 1..sigma+1
        self.F = F
        self.M = M
        self.C = C                # len sigma+3 cumulative edge counts
        self.B = B
        self.samples = samples
        self.sample_rate = sample_rate
        self.bwt_length = F.universe
        self.node_count = F.ones
        self.edge_count = M.ones

    # -- construction --------------------------------------------------

    @classmethod
    def from_layout(cls, alphabet, node_specs, ids, sampled_flags,
                    sample_rate=DEFAULT_SAMPLE_RATE):
        """Build from explicit per-node layout rows.

        node_specs: list of (label_code, in_label_codes, out_degree) in rank
        order; the final node's out_degree must already be 1 (its wraparound
        bit) and the initial node's in-labels must include the '$' slot.
        """
        sigma = alphabet.sigma
        occ_positions = {c: [] for c in range(1, sigma + 2)}
        f_positions = []
        m_positions = []
        label_counts = [0] * (sigma + 2)
        pos = 0
        for idx, (label, in_labels, out_degree) in enumerate(node_specs):
            width = max(len(in_labels), out_degree)
            if width <= 0:
                raise InternalError(f"node {idx} has an empty range")
            sp = pos + 1
            f_positions.append(sp)
            for k in range(out_degree):
                m_positions.append(sp + k)
            prev = -1
            for k, c in enumerate(sorted(in_labels)):
                if c == prev:
                    raise InternalError(
                        f"node {idx} has two incoming edges labeled {c}")
                prev = c
                label_counts[c] += 1
                if c > 0:
                    occ_positions[c].append(sp + k)
            pos += width
        universe = pos
        C = [0] * (sigma + 3)
        for c in range(1, sigma + 3):
            C[c] = C[c - 1] + label_counts[c - 1]
        occ = {
            c: BitVector.from_positions(occ_positions[c], universe,
                                        encoding=GAP)
            for c in range(1, sigma + 2)
        }
        F = BitVector.from_positions(f_positions, universe, encoding=RUNLENGTH)
        M = BitVector.from_positions(m_positions, universe, encoding=RUNLENGTH)
        b_positions = []
        samples = []
        for idx, flag in enumerate(sampled_flags):
            if flag:
                b_positions.append(f_positions[idx])
                samples.append(ids[idx])
        B = BitVector.from_positions(b_positions, universe, encoding=GAP)
        return cls(alphabet, occ, F, M, C, B, samples, sample_rate)

    @classmethod
    def from_automaton(cls, sa, ids=None, sample_rate=DEFAULT_SAMPLE_RATE,
                       verify="edges"):
        """Index a SortedAutomaton.

        ids: per-node values returned by locate; defaults to the value of
        the origin node in the source automaton (for builder outputs, the
        alignment column). sample_rate d controls extra samples on long
        id(u)+1 runs; nodes with out-degree != 1 or a broken +1 step are
        always sampled.
        """
        if sample_rate < 1:
            raise InputError("sample rate must be >= 1")
        n = sa.node_count
        if n < 2:
            raise InputError("automaton must have at least '#' and '$' nodes")
        labels = sa.node_labels
        if labels[0] != 0 or labels[-1] != sa.source.alphabet.sigma + 1:
            raise InputError("nodes must be in rank order: '$' first, "
                             "'#' last")
        if ids is None:
            ids = [sa.source.values[f] for f in sa.node_from]
        elif callable(ids):
            ids = [ids(i) for i in range(n)]
        else:
            ids = list(ids)
        if len(ids) != n or any(v < 0 for v in ids):
            raise InputError("ids must assign a non-negative value per node")

        in_labels = [[] for _ in range(n)]
        out_deg = [0] * n
        succ = [[] for _ in range(n)]
        for (u, v) in sa.edges:
            in_labels[v].append(labels[u])
            out_deg[u] += 1
            succ[u].append(v)
        # wraparound edge: final node's M bit, '$' slot in the initial node
        in_labels[n - 1].append(0)
        out_deg[0] = 1

        sampled = _choose_samples(n, out_deg, succ, ids, sample_rate)
        specs = list(zip(labels, in_labels, out_deg))
        ix = cls.from_layout(sa.source.alphabet, specs, ids, sampled,
                             sample_rate)
        if verify == "edges":
            ix.verify_navigation(sa.edges)
        elif verify == "full":
            ix.verify_navigation(sa.edges)
            ix.verify_against_oracles(sa)
        elif verify != "none":
            raise InputError(f"unknown verification level {verify!r}")
        return ix

    def verify_navigation(self, edges):
        """Walk every edge and assert LF/Psi inversion; raises on failure."""
        ranges = [self.node_range(i + 1) for i in range(self.node_count)]
        expected = {}
        for (u, v) in edges:
            expected.setdefault(u, set()).add(v)
        for u in range(self.node_count):
            got = self.psi(ranges[u])
            want = {ranges[v] for v in expected.get(u, set())}
            if set(got) != want:
                raise InternalError(
                    f"Psi mismatch at node {u}: navigation is inconsistent; "
                    "the automaton is not prefix-range-sorted")
            lab = self.node_label(ranges[u])
            for r in got:
                if self.lf(r, lab) != ranges[u]:
                    raise InternalError(
                        f"LF does not invert Psi at node {u}")

    def verify_against_oracles(self, sa):
        """Oracle-scale check: sorted automaton really is range-sorted."""
        from .automaton import is_prefix_range_sorted_naive
        auto = sa.to_automaton()
        if not is_prefix_range_sorted_naive(auto):
            raise InternalError("constructed automaton is not "
                                "prefix-range-sorted")

    # -- basic navigation ----------------------------------------------

    def node_range(self, ordinal):
        """Range of the node with 1-based rank `ordinal`."""
        if not (1 <= ordinal <= self.node_count):
            raise InputError(f"node ordinal {ordinal} out of range")
        sp = self.F._select(ordinal)
        if ordinal == self.node_count:
            return NodeRange(sp, self.bwt_length)
        return NodeRange(sp, self.F._select(ordinal + 1) - 1)

    def node_ordinal(self, r):
        return self.F._rank(r.sp)

    def node_ordinals(self, r):
        """1-based ordinals of all nodes covered by a find() range."""
        if r is None:
            return range(0)
        return range(self.F._rank(r.sp), self.F._rank(r.ep) + 1)

    def _char_of_edge_rank(self, i):
        C = self.C
        lo, hi = 0, len(C) - 2
        while lo < hi:
            mid = (lo + hi) // 2
            if C[mid + 1] >= i:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def _range_of_m_position(self, pos_first, pos_last):
        first = self.F.pred1(pos_first)
        nxt = self.F.succ1(pos_last + 1) if pos_last < self.bwt_length else None
        sp = first[0]
        ep = nxt[0] - 1 if nxt is not None else self.bwt_length
        return NodeRange(sp, ep)

    def lf(self, r, c):
        """Range of the predecessor u with label c, or None.

        c is a symbol code in 1..sigma+1 or a single character; '$' is not
        a valid edge label to step on (there is no occurrence vector for
        the single wraparound slot).
        """
        c = self._as_code(c)
        if not (1 <= c <= self.alphabet.sigma + 1):
            raise InputError(f"lf label code {c} outside the alphabet")
        occ = self.occ[c]
        hits = occ.rank1(r.ep)
        if hits == 0:
            return None
        pos = occ.select1(hits)
        if pos < r.sp:
            return None
        i = self.C[c] + hits
        mpos = self.M.select1(i)
        start = self.F.pred1(mpos)
        nxt = self.F.succ1(mpos + 1) if mpos < self.bwt_length else None
        sp = start[0]
        ep = nxt[0] - 1 if nxt is not None else self.bwt_length
        return NodeRange(sp, ep)

    def psi(self, r):
        """Ranges of all successor nodes (empty for the final node)."""
        low = self.M.rank1(r.sp)
        c = self._char_of_edge_rank(low)
        if c == 0:
            return []  # final node: the wraparound bit is not a real edge
        high = self.M.rank1(r.ep)
        occ = self.occ[c]
        out = []
        for i in range(low, high + 1):
            j = occ.select1(i - self.C[c])
            out.append(self._range_of_m_position(j, j))
        return out

    def node_label(self, r):
        """Symbol code of the node owning range r."""
        return self._char_of_edge_rank(self.M.rank1(r.sp))

    def node_label_char(self, r):
        return self.alphabet.char(self.node_label(r))

    def _as_code(self, c):
        if isinstance(c, str):
            return self.alphabet.code(c)
        return c

    # -- searching -------------------------------------------------------

    def find(self, pattern):
        """Backward search; the range of nodes with pattern as a path prefix.

        Empty pattern matches everything. Sentinels and characters outside
        the alphabet raise InputError. Returns None when nothing matches.
        """
        if pattern == "":
            return NodeRange(1, self.bwt_length)
        codes = []
        for ch in pattern:
            if ch in (INITIAL_CHAR, FINAL_CHAR, GAP_CHAR):
                raise InputError(f"pattern may not contain {ch!r}")
            codes.append(self.alphabet.code(ch))
        r = self._initial_range(codes[-1])
        for c in reversed(codes[:-1]):
            if r is None:
                return None
            r = self._step(r, c)
        return r

    def _initial_range(self, c):
        lo = self.C[c] + 1
        hi = self.C[c + 1]
        if hi < lo:
            return None
        return self._range_of_m_position(self.M.select1(lo),
                                         self.M.select1(hi))

    def _step(self, r, c):
        occ = self.occ[c]
        before = occ.rank1(r.sp - 1)
        through = occ.rank1(r.ep)
        if through <= before:
            return None
        first = self.M.select1(self.C[c] + before + 1)
        last = self.M.select1(self.C[c] + through)
        return self._range_of_m_position(first, last)

    # -- locate / display -------------------------------------------------

    def locate(self, r):
        """Node value id(v) for a single-node range."""
        steps = 0
        current = r
        while True:
            if self.B.access(current.sp):
                return self.samples[self.B.rank1(current.sp) - 1] - steps
            succ = self.psi(current)
            if len(succ) != 1:
                raise InternalError("unsampled node without a unique "
                                    "successor; sampling is inconsistent")
            current = succ[0]
            steps += 1
            if steps > self.sample_rate:
                raise InternalError("locate exceeded the sample rate bound")

    def locate_all(self, r):
        """Node values for every node in a find() range, in rank order."""
        return [self.locate(self.node_range(o)) for o in self.node_ordinals(r)]

    def display(self, r, k):
        """Prefix of the path label from the node of r, up to k characters.

        Stops early at a node with zero or several outgoing edges.
        """
        if k < 0:
            raise InputError("display length must be >= 0")
        out = []
        current = r
        while len(out) < k:
            out.append(self.node_label_char(current))
            succ = self.psi(current)
            if len(succ) != 1:
                break
            current = succ[0]
        return "".join(out)

    # -- reporting ----------------------------------------------------------

    def stats(self):
        """Size and shape report; edge count follows the C-array convention
        (the final node's wraparound bit counts as an edge)."""
        comp = {}
        for c in range(1, self.alphabet.sigma + 2):
            comp[f"occ[{self.alphabet.char(c)}]"] = len(self.occ[c].to_bytes())
        comp["F"] = len(self.F.to_bytes())
        comp["M"] = len(self.M.to_bytes())
        comp["B"] = len(self.B.to_bytes())
        width = _sample_width(self.samples)
        comp["samples"] = 1 + 8 + len(_pack_values(self.samples, width))
        return {
            "nodes": self.node_count,
            "edges": self.edge_count,
            "bwt_length": self.bwt_length,
            "sigma": self.alphabet.sigma,
            "sample_rate": self.sample_rate,
            "sample_count": len(self.samples),
            "components": comp,
            "component_bytes": sum(comp.values()),
        }

    # -- serialization --------------------------------------------------

    def to_bytes(self):
        sigma = self.alphabet.sigma
        head = bytearray()
        head += MAGIC
        head += struct.pack("<I", FORMAT_VERSION)
        head += struct.pack("<I", sigma)
        head += self.alphabet.letters.encode("ascii")
        head += struct.pack("<I", self.sample_rate)
        head += struct.pack(f"<{sigma + 3}Q", *self.C)
        body = bytearray()
        for c in range(1, sigma + 2):
            body += self.occ[c].to_bytes()
        body += self.F.to_bytes()
        body += self.M.to_bytes()
        body += self.B.to_bytes()
        width = _sample_width(self.samples)
        body += struct.pack("<BQ", width, len(self.samples))
        body += _pack_values(self.samples, width)
        return bytes(head + body)

    @classmethod
    def from_bytes(cls, data):
        if len(data) < 12:
            raise FormatError("index file too short")
        if data[:4] != MAGIC:
            raise FormatError("bad magic; not an index file")
        version, sigma = struct.unpack_from("<II", data, 4)
        if version != FORMAT_VERSION:
            raise FormatError(f"unsupported format version {version}")
        offset = 12
        try:
            letters = data[offset:offset + sigma].decode("ascii")
        except UnicodeDecodeError as exc:
            raise FormatError("alphabet is not ASCII") from exc
        if len(letters) != sigma:
            raise FormatError("truncated alphabet")
        offset += sigma
        alphabet = Alphabet(letters)
        if len(data) < offset + 4 + 8 * (sigma + 3):
            raise FormatError("truncated header")
        (sample_rate,) = struct.unpack_from("<I", data, offset)
        offset += 4
        C = list(struct.unpack_from(f"<{sigma + 3}Q", data, offset))
        offset += 8 * (sigma + 3)
        occ = {}
        for c in range(1, sigma + 2):
            occ[c], offset = BitVector.from_bytes(data, offset)
        F, offset = BitVector.from_bytes(data, offset)
        M, offset = BitVector.from_bytes(data, offset)
        B, offset = BitVector.from_bytes(data, offset)
        if len(data) < offset + 9:
            raise FormatError("truncated sample header")
        width, count = struct.unpack_from("<BQ", data, offset)
        offset += 9
        nbytes = (width * count + 7) // 8
        if len(data) < offset + nbytes:
            raise FormatError("truncated sample array")
        samples = _unpack_values(data[offset:offset + nbytes], count, width) \
            if width else [0] * count
        offset += nbytes
        if offset != len(data):
            raise FormatError("trailing bytes after index payload")
        if B.ones != count:
            raise FormatError("sample count does not match marker vector")
        return cls(alphabet, occ, F, M, C, B, samples, sample_rate)


def _sample_width(samples):
    top = max(samples, default=0)
    return max(top.bit_length(), 1) if top else 0


def _choose_samples(n, out_deg, succ, ids, d):
    """Forced samples plus one per d nodes on unsampled id+1 runs."""
    sampled = [False] * n
    for v in range(n):
        if out_deg[v] != 1 or v == 0:
            sampled[v] = True
        else:
            w = succ[v][0]
            if ids[w] != ids[v] + 1:
                sampled[v] = True
    # reverse topological pass: distance to the next sample along the
    # unique-successor walk; insert a sample whenever it reaches d
    indeg = [0] * n
    for v in range(n):
        for w in succ[v]:
            indeg[w] += 1
    order = []
    queue = [v for v in range(n) if indeg[v] == 0]
    while queue:
        v = queue.pop()
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(order) != n:
        raise InternalError("sorted automaton contains a cycle")
    dist = [0] * n
    for v in reversed(order):
        if sampled[v]:
            dist[v] = 0
            continue
        dist[v] = dist[succ[v][0]] + 1
        if dist[v] >= d:
            sampled[v] = True
            dist[v] = 0
    return sampled


def build_index(alignment, m=4, sample_rate=DEFAULT_SAMPLE_RATE,
                verify="edges", ids=None, instrument=None):
    """Alignment -> automaton -> sorted automaton -> index convenience chain.

    Returns (index, build_info dict).
    """
    from .alignment_builder import build_automaton
    from .construction import build_sorted_automaton

    t0 = time.perf_counter()
    auto = build_automaton(alignment, m=m)
    sa, rounds, peak = build_sorted_automaton(auto, instrument=instrument)
    ix = GcsaIndex.from_automaton(sa, ids=ids, sample_rate=sample_rate,
                                  verify=verify)
    info = {
        "rounds": rounds,
        "peak_nodes": peak,
        "automaton": auto,
        "automaton_nodes": auto.node_count,
        "automaton_edges": len(auto.edges),
        "wall_time": time.perf_counter() - t0,
    }
    return ix, info
