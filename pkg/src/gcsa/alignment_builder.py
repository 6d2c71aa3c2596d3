"""Multiple alignment ingestion and reverse-deterministic automaton building.

The pipeline is: wrap each row in sentinels, run one right-to-left pass
that shifts equivalent preceding characters into a shared column, drop
all-gap columns, then create one temporary node per non-gap cell and merge
cells of a column whose context labels (own character plus the next m
non-gap characters, '$'-padded) are equal. The result is always reverse
deterministic, so the prefix-doubling construction can consume it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automaton import (
    DNA,
    FINAL_CHAR,
    GAP_CHAR,
    INITIAL_CHAR,
    Alphabet,
    Automaton,
)
from .errors import InputError


@dataclass
class AlignmentMatrix:
    """r rows of equal length over the alphabet letters plus '-'."""

    rows: list
    alphabet: Alphabet = DNA

    def __post_init__(self):
        if not self.rows:
            raise InputError("alignment must contain at least one row")
        width = len(self.rows[0])
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise InputError(
                    f"row {i + 1} has length {len(row)}, expected {width}")
            for ch in row:
                if ch != GAP_CHAR and ch not in self.alphabet.letters:
                    raise InputError(
                        f"row {i + 1} contains {ch!r}, not in alphabet "
                        f"{self.alphabet.letters!r} (gaps are '-')")

    @property
    def n_columns(self):
        return len(self.rows[0])

    @property
    def n_rows(self):
        return len(self.rows)


def parse_alignment(text, alphabet=DNA):
    """Parse plain rows or FASTA ('>' headers start a new row). Upper-cases."""
    rows = []
    current = None
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            saw_header = True
            if current is not None:
                rows.append(current)
            current = ""
            continue
        chunk = line.upper()
        for ch in chunk:
            if ch != GAP_CHAR and ch not in alphabet.letters:
                raise InputError(
                    f"line {lineno}: character {ch!r} not in alphabet "
                    f"{alphabet.letters!r}")
        if saw_header:
            if current is None:
                raise InputError(f"line {lineno}: sequence before any header")
            current += chunk
        else:
            rows.append(chunk)
    if current:
        rows.append(current)
    if not rows:
        raise InputError("no alignment rows found")
    return AlignmentMatrix(rows, alphabet)


def normalize_alignment(am):
    """Sentinel-wrapped matrix with the equivalence shift applied.

    Returns a new AlignmentMatrix whose rows start with '#' and end with
    '$'. After the pass, whenever two rows hold the same character at a
    column and their preceding non-gap characters are equal, those
    preceding characters sit in the same column; all-gap columns are gone.
    """
    grid = [[INITIAL_CHAR] + list(row) + [FINAL_CHAR] for row in am.rows]
    r = len(grid)
    width = len(grid[0])

    # ascending non-gap column lists per row, and a cursor walking each
    # list right-to-left in step with the column loop
    occ = [[j for j in range(width) if grid[i][j] != GAP_CHAR]
           for i in range(r)]
    ptr = [len(occ[i]) - 1 for i in range(r)]

    for j in range(width - 1, 0, -1):
        groups = {}
        movers = []
        for i in range(r):
            if ptr[i] < 0 or occ[i][ptr[i]] != j:
                continue
            movers.append(i)
            if ptr[i] == 0:
                continue  # no preceding character
            prev_col = occ[i][ptr[i] - 1]
            key = (grid[i][j], grid[i][prev_col])
            groups.setdefault(key, []).append((i, prev_col))
        for members in groups.values():
            if len(members) < 2:
                continue
            target = max(col for _, col in members)
            for i, col in members:
                if col != target:
                    grid[i][target] = grid[i][col]
                    grid[i][col] = GAP_CHAR
                    occ[i][ptr[i] - 1] = target
        for i in movers:
            ptr[i] -= 1

    keep = [j for j in range(width)
            if any(grid[i][j] != GAP_CHAR for i in range(r))]
    rows = ["".join(grid[i][j] for j in keep) for i in range(r)]
    return AlignmentMatrix(rows, _SentinelAlphabet(am.alphabet))


class _SentinelAlphabet:
    """Alphabet view that lets normalized rows carry '#' and '$'."""

    def __init__(self, base):
        self.base = base
        self.letters = base.letters + INITIAL_CHAR + FINAL_CHAR

    def __getattr__(self, name):
        return getattr(self.base, name)


def context_label(am, row, col, m):
    """Character at (row, col) plus the next m non-gap characters.

    Columns are 1-based into a normalized matrix; the label is padded with
    '$' when the row runs out of characters.
    """
    line = am.rows[row]
    if not (1 <= col <= len(line)):
        raise InputError(f"column {col} out of range")
    if line[col - 1] == GAP_CHAR:
        raise InputError(f"({row}, {col}) is a gap position")
    label = [line[col - 1]]
    j = col
    while len(label) < m + 1 and j < len(line):
        if line[j] != GAP_CHAR:
            label.append(line[j])
        j += 1
    while len(label) < m + 1:
        label.append(FINAL_CHAR)
    return "".join(label)


def build_automaton(am, m=4):
    """Reverse-deterministic automaton over all row-switching paths.

    Cells of one column merge when their length-(m+1) context labels are
    equal; column 1 (the '#' column) always merges fully. Node values are
    the 1-based columns of the normalized matrix, which is what locate
    reports by default.
    """
    if m < 0:
        raise InputError("context length must be >= 0")
    if isinstance(am.alphabet, _SentinelAlphabet):
        norm = am
    else:
        norm = normalize_alignment(am)
    base_alphabet = norm.alphabet.base
    width = len(norm.rows[0])
    r = len(norm.rows)

    # per-row non-gap cells and their context labels
    cells = []
    for i in range(r):
        row = norm.rows[i]
        cols = [j + 1 for j in range(width) if row[j] != GAP_CHAR]
        labels = [context_label(norm, i, c, m) for c in cols]
        cells.append(list(zip(cols, labels)))

    a = Automaton(base_alphabet)
    class_node = {}

    def node_for(col, label):
        key = (col, label) if col > 1 else (1, INITIAL_CHAR)
        node = class_node.get(key)
        if node is None:
            node = a.add_node(base_alphabet.code(label[0]), value=col)
            class_node[key] = node
        return node

    for i in range(r):
        prev = None
        for col, label in cells[i]:
            node = node_for(col, label)
            if prev is not None:
                a.add_edge(prev, node)
            prev = node
    return a


def recombinant_strings(am, m=4, limit=100_000):
    """Row-switching strings read directly off the normalized matrix.

    Independent enumeration used as an oracle for build_automaton: start at
    the '#' column, repeatedly hop to any cell of the current column whose
    context label matches, then advance along that row. Strings are the
    sentinel-wrapped path labels.
    """
    if isinstance(am.alphabet, _SentinelAlphabet):
        norm = am
    else:
        norm = normalize_alignment(am)
    r = len(norm.rows)
    width = len(norm.rows[0])

    next_cell = []   # per row: col -> next non-gap col (or None)
    for i in range(r):
        row = norm.rows[i]
        nxt = {}
        last = None
        for j in range(width, 0, -1):
            if row[j - 1] != GAP_CHAR:
                nxt[j] = last
                last = j
        next_cell.append(nxt)

    label_of = {}
    for i in range(r):
        for j in range(1, width + 1):
            if norm.rows[i][j - 1] != GAP_CHAR:
                label_of[(i, j)] = context_label(norm, i, j, m)

    from functools import lru_cache

    @lru_cache(maxsize=None)
    def strings_from(i, col):
        # all strings readable from cell (i, col) inclusive
        label = label_of[(i, col)]
        ch = norm.rows[i][col - 1]
        if ch == FINAL_CHAR:
            return frozenset({FINAL_CHAR})
        out = set()
        for i2 in range(r):
            key = (i2, col)
            if key not in label_of:
                continue
            if col > 1 and label_of[key] != label:
                continue
            nxt = next_cell[i2][col]
            for s in strings_from(i2, nxt):
                out.add(ch + s)
                if len(out) > limit:
                    raise InputError("recombinant enumeration limit exceeded")
        return frozenset(out)

    result = sorted(strings_from(0, 1))
    strings_from.cache_clear()
    return result
