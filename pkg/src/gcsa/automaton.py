"""Labeled-graph automata plus the brute-force oracles used for validation.

The automaton is the ground-truth object: a directed labeled graph with a
unique initial node labeled '#' and a unique final node labeled '$'.
Everything in here is deliberately naive (exhaustive DFS, full suffix-set
enumeration) and capped in size; the oracles exist to check the index and
the construction pipeline, not to be fast.

Symbol codes: '$' = 0, alphabet letters = 1..sigma, '#' = sigma + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError, InternalError

GAP_CHAR = "-"
INITIAL_CHAR = "#"
FINAL_CHAR = "$"

DEFAULT_PATH_LIMIT = 10_000


@dataclass(frozen=True)
class Alphabet:
    """Character/code mapping with '$' smallest and '#' largest."""

    letters: str = "ACGT"

    def __post_init__(self):
        if len(set(self.letters)) != len(self.letters):
            raise InputError("alphabet letters must be distinct")
        for ch in (GAP_CHAR, INITIAL_CHAR, FINAL_CHAR):
            if ch in self.letters:
                raise InputError(f"{ch!r} is reserved and cannot be a letter")

    @property
    def sigma(self):
        return len(self.letters)

    def code(self, char):
        if char == FINAL_CHAR:
            return 0
        if char == INITIAL_CHAR:
            return self.sigma + 1
        idx = self.letters.find(char)
        if idx < 0:
            raise InputError(f"character {char!r} not in alphabet "
                             f"{self.letters!r}")
        return idx + 1

    def char(self, code):
        if code == 0:
            return FINAL_CHAR
        if code == self.sigma + 1:
            return INITIAL_CHAR
        if 1 <= code <= self.sigma:
            return self.letters[code - 1]
        raise InputError(f"symbol code {code} out of range")

    def codes(self, text):
        return [self.code(ch) for ch in text]


DNA = Alphabet("ACGT")


class Automaton:
    """Directed labeled graph; node ids are dense integers.

    ``values[v]`` is an application-level node value (for a builder output
    it is the alignment column); it defaults to the node id itself.
    """

    def __init__(self, alphabet=DNA):
        self.alphabet = alphabet
        self.labels = []          # symbol code per node
        self.values = []          # node value per node
        self.initial = None
        self.final = None
        self._succ = []
        self._pred = []
        self._edge_set = set()

    def add_node(self, label_code, value=None):
        node = len(self.labels)
        self.labels.append(label_code)
        self.values.append(node if value is None else value)
        self._succ.append([])
        self._pred.append([])
        if label_code == self.initial_code:
            self.initial = node
        elif label_code == 0:
            self.final = node
        return node

    def add_edge(self, u, v):
        if u == v:
            raise InputError("self-loops are not allowed")
        if (u, v) in self._edge_set:
            return
        self._edge_set.add((u, v))
        self._succ[u].append(v)
        self._pred[v].append(u)

    @property
    def initial_code(self):
        return self.alphabet.sigma + 1

    @property
    def node_count(self):
        return len(self.labels)

    @property
    def edges(self):
        return self._edge_set

    def succ(self, v):
        return self._succ[v]

    def pred(self, v):
        return self._pred[v]

    def label_char(self, v):
        return self.alphabet.char(self.labels[v])

    def topological_order(self):
        """Kahn order; raises InputError if the graph has a cycle."""
        indeg = [len(self._pred[v]) for v in range(self.node_count)]
        queue = [v for v in range(self.node_count) if indeg[v] == 0]
        order = []
        while queue:
            v = queue.pop()
            order.append(v)
            for w in self._succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        if len(order) != self.node_count:
            raise InputError("automaton contains a cycle")
        return order

    def is_acyclic(self):
        try:
            self.topological_order()
            return True
        except InputError:
            return False

    def longest_string_length(self):
        """Length of the longest string in the language (nodes on a path)."""
        order = self.topological_order()
        dist = [0] * self.node_count
        for v in order:
            for w in self._succ[v]:
                if dist[v] + 1 > dist[w]:
                    dist[w] = dist[v] + 1
        return dist[self.final] + 1

    def path_count(self):
        """Number of initial->final paths (may be large; pure int)."""
        order = self.topological_order()
        count = [0] * self.node_count
        count[self.final] = 1
        for v in reversed(order):
            if v != self.final:
                count[v] = sum(count[w] for w in self._succ[v])
        return count[self.initial]


def validate(a, require_acyclic=True):
    """Check the type invariants; returns a list of violation strings."""
    problems = []
    initials = [v for v in range(a.node_count) if a.labels[v] == a.initial_code]
    finals = [v for v in range(a.node_count) if a.labels[v] == 0]
    if len(initials) != 1:
        problems.append(f"expected exactly one '#' node, found {len(initials)}")
    if len(finals) != 1:
        problems.append(f"expected exactly one '$' node, found {len(finals)}")
    if problems:
        return problems
    initial, final = initials[0], finals[0]
    if a.initial != initial or a.final != final:
        problems.append("initial/final bookkeeping out of sync with labels")
    for (u, v) in a.edges:
        if u == v:
            problems.append(f"self-loop at node {u}")
    if require_acyclic and not a.is_acyclic():
        problems.append("automaton contains a cycle but must be acyclic")
        return problems
    # reachability in both directions: every node on some #->$ path
    seen_fwd = _reach(a, initial, a.succ)
    seen_bwd = _reach(a, final, a.pred)
    for v in range(a.node_count):
        if v not in seen_fwd or v not in seen_bwd:
            problems.append(f"node {v} off all #->$ paths")
    return problems


def _reach(a, start, step):
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in step(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _suffix_sets(a, limit):
    """Memoized per-node sets of labels of all v -> final paths."""
    if a.path_count() > limit:
        raise InputError(f"automaton exceeds the oracle path limit {limit}")
    order = a.topological_order()
    sets = [None] * a.node_count
    for v in reversed(order):
        ch = a.label_char(v)
        if v == a.final:
            sets[v] = frozenset({ch})
        else:
            acc = set()
            for w in a.succ(v):
                for s in sets[w]:
                    acc.add(ch + s)
            sets[v] = frozenset(acc)
    return sets


def suffixes_from(a, v, limit=DEFAULT_PATH_LIMIT):
    """Labels of all paths from v to the final node."""
    return set(_suffix_sets(a, limit)[v])


def enumerate_language(a, limit=None):
    """All strings #x$ recognized by the automaton, sorted.

    For a cyclic automaton a limit must be given; strings are then
    enumerated shortest-first up to `limit` of them.
    """
    if not a.is_acyclic():
        if limit is None:
            raise InputError("cyclic automaton requires an explicit limit")
        return _enumerate_cyclic(a, limit)
    cap = limit if limit is not None else DEFAULT_PATH_LIMIT
    return sorted(_suffix_sets(a, cap)[a.initial])


def _enumerate_cyclic(a, limit):
    out = set()
    frontier = [(a.initial, a.label_char(a.initial))]
    while frontier and len(out) < limit:
        nxt = []
        for v, s in frontier:
            if v == a.final:
                out.add(s)
                if len(out) >= limit:
                    break
                continue
            for w in a.succ(v):
                nxt.append((w, s + a.label_char(w)))
        frontier = nxt
    return sorted(out)


def is_reverse_deterministic(a):
    """True iff no node has two distinct predecessors sharing a label."""
    for v in range(a.node_count):
        seen = set()
        for u in a.pred(v):
            lab = a.labels[u]
            if lab in seen:
                return False
            seen.add(lab)
    return True


def is_prefix_sorted_naive(a, limit=DEFAULT_PATH_LIMIT):
    """Check Definition-1 sortedness; returns (ok, {node: p(v) or None}).

    p(v) is the shortest prefix shared by all suffixes recognized from v
    that no other node's recognized suffix starts with.
    """
    sets = _suffix_sets(a, limit)
    prefixes = {}
    ok = True
    for v in range(a.node_count):
        suffixes = sorted(sets[v])
        lcp = suffixes[0]
        for s in suffixes[1:]:
            k = 0
            while k < len(lcp) and k < len(s) and lcp[k] == s[k]:
                k += 1
            lcp = lcp[:k]
        found = None
        for length in range(1, len(lcp) + 1):
            cand = lcp[:length]
            owned = True
            for u in range(a.node_count):
                if u == v:
                    continue
                if any(s.startswith(cand) for s in sets[u]):
                    owned = False
                    break
            if owned:
                found = cand
                break
        prefixes[v] = found
        if found is None:
            ok = False
    return ok, prefixes


def is_prefix_range_sorted_naive(a, limit=DEFAULT_PATH_LIMIT):
    """True iff the lexicographic suffix ranges of nodes are disjoint."""
    sets = _suffix_sets(a, limit)
    for v in range(a.node_count):
        lo, hi = min(sets[v]), max(sets[v])
        for u in range(a.node_count):
            if u == v:
                continue
            if any(lo <= s <= hi for s in sets[u]):
                return False
    return True


def naive_find(a, pattern):
    """Exact set of nodes from which some path label starts with `pattern`.

    The pattern is a plain string over the alphabet letters (sentinels are
    never matched). Computed by exhaustive memoized DFS; this is the oracle
    that index.find is checked against.
    """
    if pattern == "":
        return set(range(a.node_count))
    chars = list(pattern)

    @lru_cache(maxsize=None)
    def can_spell(v, t):
        if a.label_char(v) != chars[t]:
            return False
        if t + 1 == len(chars):
            return True
        return any(can_spell(w, t + 1) for w in a.succ(v))

    result = {v for v in range(a.node_count) if can_spell(v, 0)}
    can_spell.cache_clear()
    return result


def prefix_occurrence_map(a, max_len):
    """Map pattern -> node set for every sentinel-free spellable string.

    Covers all strings of length <= max_len spellable from some node; used
    to drive exhaustive find-vs-oracle sweeps without calling naive_find
    once per pattern.
    """
    order = a.topological_order()
    # spell[v] = set of sentinel-free strings of length <= max_len readable
    # starting at v (must start with v's own label)
    spell = [set() for _ in range(a.node_count)]
    for v in reversed(order):
        ch = a.label_char(v)
        if ch in (INITIAL_CHAR, FINAL_CHAR):
            continue
        acc = {ch}
        if max_len > 1:
            for w in a.succ(v):
                for s in spell[w]:
                    if len(s) < max_len:
                        acc.add(ch + s)
        spell[v] = acc
    occurrence = {}
    for v in range(a.node_count):
        for s in spell[v]:
            occurrence.setdefault(s, set()).add(v)
    return occurrence


# -- text format -----------------------------------------------------

def dump_automaton_text(a):
    lines = []
    for v in range(a.node_count):
        lines.append(f"node {v} {a.label_char(v)}")
    for (u, v) in sorted(a.edges):
        lines.append(f"edge {u} {v}")
    lines.append(f"initial {a.initial}")
    lines.append(f"final {a.final}")
    return "\n".join(lines) + "\n"


def load_automaton_text(text, alphabet=DNA):
    """Parse the test automaton format; comment lines start with '#!'."""
    a = Automaton(alphabet)
    id_map = {}
    declared_initial = declared_final = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#!"):
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "node":
                ext_id, label = parts[1], parts[2]
                id_map[ext_id] = a.add_node(alphabet.code(label))
            elif kind == "edge":
                a.add_edge(id_map[parts[1]], id_map[parts[2]])
            elif kind == "initial":
                declared_initial = id_map[parts[1]]
            elif kind == "final":
                declared_final = id_map[parts[1]]
            else:
                raise InputError(f"unknown directive {kind!r}")
        except (IndexError, KeyError) as exc:
            raise InputError(f"line {lineno}: malformed {kind!r} line") from exc
    if declared_initial is not None and declared_initial != a.initial:
        raise InternalError("declared initial node does not carry '#'")
    if declared_final is not None and declared_final != a.final:
        raise InternalError("declared final node does not carry '$'")
    return a


def chain_automaton(text, alphabet=DNA):
    """Automaton recognizing exactly {#text$}; test helper."""
    a = Automaton(alphabet)
    prev = a.add_node(alphabet.sigma + 1, value=1)
    for i, ch in enumerate(text):
        node = a.add_node(alphabet.code(ch), value=i + 2)
        a.add_edge(prev, node)
        prev = node
    final = a.add_node(0, value=len(text) + 2)
    a.add_edge(prev, final)
    return a
