"""Prefix-doubling transformation into a prefix-range-sorted automaton.

Starting from a reverse-deterministic acyclic automaton, each round joins
every unsorted node with its possible continuations (doubling the sorted
context length), re-ranks, and merges rank groups that collapsed onto a
single origin node. Once all nodes are sorted, adjacent ranks sharing an
origin are merged and the edges of the sorted automaton are generated
from the original edge set by a coordinated scan.

Records never materialize their context strings; `rank` stands in for the
string and `from_`/`to` tie the record back to the original automaton.
Passing debug_labels=True carries the strings anyway, for the oracles.
"""

from __future__ import annotations

import math

from .automaton import Automaton
from .errors import InputError, InternalError


class DoublingNode:
    """Construction-time record: one (context, origin) class per round."""

    __slots__ = ("label", "rank", "from_", "to", "sorted", "prefix")

    def __init__(self, label, rank, from_, to, sorted_, prefix=None):
        self.label = label
        self.rank = rank
        self.from_ = from_
        self.to = to
        self.sorted = sorted_
        self.prefix = prefix

    def __repr__(self):
        return (f"DoublingNode(label={self.label}, rank={self.rank}, "
                f"from={self.from_}, to={self.to}, sorted={self.sorted})")


class SortedAutomaton:
    """Prefix-range-sorted node set plus edges, in rank order.

    node_labels[i] and node_from[i] describe the node of rank i (0-based);
    edges hold (u, v) index pairs. `source` is the original automaton.
    """

    def __init__(self, node_labels, node_from, edges, source):
        self.node_labels = node_labels
        self.node_from = node_from
        self.edges = edges
        self.source = source

    @property
    def node_count(self):
        return len(self.node_labels)

    def to_automaton(self):
        """Materialize as an Automaton (oracle checks only)."""
        a = Automaton(self.source.alphabet)
        for i, code in enumerate(self.node_labels):
            a.add_node(code, value=self.source.values[self.node_from[i]])
        for (u, v) in self.edges:
            a.add_edge(u, v)
        return a


def _assign_ranks(records, key):
    """Dense 1-based ranks by `key`; returns records sorted by key."""
    records.sort(key=key)
    rank = 0
    prev = None
    for rec in records:
        k = key(rec)
        if k != prev:
            rank += 1
            prev = k
        rec.rank = rank
    return records


def _mark_sorted(records):
    """Set sorted flags from rank multiplicity; records sorted by rank."""
    n = len(records)
    i = 0
    while i < n:
        j = i
        while j < n and records[j].rank == records[i].rank:
            j += 1
        unique = (j - i == 1)
        for k in range(i, j):
            records[k].sorted = unique
        i = j
    return records


def init_doubling(a, debug_labels=False):
    """One record per node; rank is the label's rank among distinct labels."""
    if not is_suitable(a):
        raise InputError("construction needs a reverse-deterministic "
                         "acyclic automaton")
    records = [
        DoublingNode(a.labels[v], 0, v, v, False,
                     a.label_char(v) if debug_labels else None)
        for v in range(a.node_count)
    ]
    _assign_ranks(records, key=lambda r: r.label)
    return _mark_sorted(records)


def is_suitable(a):
    from .automaton import is_reverse_deterministic
    return a.is_acyclic() and is_reverse_deterministic(a)


def doubling_step(records, a):
    """One doubling round: duplicate sorted records, join unsorted ones."""
    by_from = {}
    for rec in records:
        by_from.setdefault(rec.from_, []).append(rec)
    out = []
    for rec in records:
        if rec.sorted:
            nxt = DoublingNode(rec.label, (rec.rank, 0), rec.from_, rec.to,
                               True, rec.prefix)
            out.append(nxt)
        else:
            for y in a.succ(rec.to):
                for cont in by_from.get(y, ()):
                    prefix = None
                    if rec.prefix is not None:
                        prefix = rec.prefix + cont.prefix
                    out.append(DoublingNode(
                        rec.label, (rec.rank, cont.rank), rec.from_,
                        cont.to, False, prefix))
    _assign_ranks(out, key=lambda r: r.rank)
    return _mark_sorted(out)


def prune_step(records):
    """Merge every maximal rank group whose members share their origin."""
    out = []
    n = len(records)
    i = 0
    while i < n:
        j = i
        while j < n and records[j].rank == records[i].rank:
            j += 1
        group = records[i:j]
        if len(group) > 1 and len({r.from_ for r in group}) == 1:
            out.append(group[0])
        else:
            out.extend(group)
        i = j
    return _mark_sorted(out)


def round_stats(records, a):
    """Per-round counts used by --dump-rounds and the simulation harness.

    Edge count follows the origin-node rule: the in-degree of each record's
    node equals the in-degree of from_ in the original automaton.
    """
    nodes = len(records)
    edges = sum(len(a.pred(r.from_)) for r in records)
    unsorted = sum(1 for r in records if not r.sorted)
    colliding = 0
    i = 0
    while i < nodes:
        j = i
        while j < nodes and records[j].rank == records[i].rank:
            j += 1
        size = j - i
        colliding += size * (size - 1) // 2
        i = j
    return {"nodes": nodes, "edges": edges, "unsorted": unsorted,
            "colliding_pairs": colliding}


def build_sorted_nodes(a, instrument=None, debug_labels=False):
    """Doubling + pruning until every node is prefix-sorted.

    Returns (records, rounds_used, peak_nodes) where peak_nodes is the
    largest record count seen, including the pre-prune intermediate sets.
    instrument(h, records) is called after round h (h=0 is the initial
    1-sorted state).
    """
    records = init_doubling(a, debug_labels=debug_labels)
    if instrument is not None:
        instrument(0, records)
    bound = max(1, math.ceil(math.log2(a.longest_string_length())))
    rounds = 0
    peak = len(records)
    while any(not r.sorted for r in records):
        if rounds > bound:
            raise InternalError(
                f"doubling failed to terminate within {bound} rounds; "
                "the input automaton is likely not reverse deterministic")
        doubled = doubling_step(records, a)
        peak = max(peak, len(doubled))
        records = prune_step(doubled)
        peak = max(peak, len(records))
        rounds += 1
        if instrument is not None:
            instrument(rounds, records)
    return records, rounds, peak


def merge_adjacent_ranks(records):
    """Collapse runs of rank-adjacent records sharing their origin node."""
    out = []
    for rec in records:
        if out and out[-1].from_ == rec.from_:
            continue
        out.append(rec)
    for i, rec in enumerate(out):
        rec.rank = i + 1
    return out


def create_edges(a, records):
    """Edges of the prefix-range-sorted automaton from the original edges.

    Incoming edges of node v are exactly the original predecessors of
    from(v). The pairs (origin predecessor, v), bucketed by predecessor
    label and generated in rank(v) order, come out sorted by rank(u); the
    coordinated scan then attributes each run of pairs with equal origin
    to the next node in rank order.
    """
    sigma_top = a.alphabet.sigma + 2
    buckets = [[] for _ in range(sigma_top)]
    for v_idx, rec in enumerate(records):
        for u0 in a.pred(rec.from_):
            buckets[a.labels[u0]].append((u0, v_idx))

    node_labels = [r.label for r in records]
    node_from = [r.from_ for r in records]

    edges = []
    scan_nodes = [i for i in range(len(records))
                  if records[i].from_ != a.final]
    pos = 0
    current_from = None
    for bucket in buckets:
        for (u0, v_idx) in bucket:
            if u0 != current_from:
                if pos >= len(scan_nodes):
                    raise InternalError("edge scan ran past the node list")
                u_idx = scan_nodes[pos]
                pos += 1
                current_from = node_from[u_idx]
                if current_from != u0:
                    raise InternalError(
                        "dangling origin reference during edge creation")
            edges.append((scan_nodes[pos - 1], v_idx))
    if pos != len(scan_nodes):
        raise InternalError("some nodes received no outgoing edges")
    return SortedAutomaton(node_labels, node_from, edges, a)


def build_sorted_automaton(a, instrument=None, debug_labels=False):
    """Full pipeline: doubling rounds, adjacent-rank merge, edge creation.

    Returns (sorted_automaton, rounds_used, peak_nodes).
    """
    records, rounds, peak = build_sorted_nodes(
        a, instrument=instrument, debug_labels=debug_labels)
    merged = merge_adjacent_ranks(records)
    sa = create_edges(a, merged)
    if sa.node_labels[0] != 0:
        raise InternalError("final node is not first in rank order")
    if sa.node_labels[-1] != a.alphabet.sigma + 1:
        raise InternalError("initial node is not last in rank order")
    return sa, rounds, peak
