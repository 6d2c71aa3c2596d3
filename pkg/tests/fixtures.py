"""Shared test fixtures, most importantly the 18-node worked example.

The example index is written out directly as per-node layout rows
(prefix, incoming labels, out-degree); sample values are the node
ordinals. Expected navigation facts for it were derived by hand from
the layout and are asserted in tests/test_index.py.
"""

from gcsa.automaton import DNA
from gcsa.index import GcsaIndex

# (node prefix, BWT characters, out-degree); rank order
EXAMPLE_NODES = [
    ("$", "G", 1),       # final node: single wraparound bit
    ("ACC", "T", 1),
    ("ACG", "G", 1),
    ("ACTA", "G", 1),
    ("ACTG", "T", 1),
    ("AG", "T", 1),
    ("AT", "G", 1),
    ("CC", "A", 1),
    ("CG", "A", 1),
    ("CTA", "A", 1),
    ("CTG", "AC", 1),
    ("G$", "AT", 1),
    ("GA", "#", 3),
    ("GT", "CT", 1),
    ("TA", "CG", 3),
    ("TG$", "C", 1),
    ("TGT", "A", 1),
    ("#", "$", 1),
]


def example_index(sample_rate=16):
    specs = []
    for prefix, bwt_chars, out_degree in EXAMPLE_NODES:
        label = DNA.code(prefix[0])
        in_labels = sorted(DNA.code(ch) for ch in bwt_chars)
        specs.append((label, in_labels, out_degree))
    ids = list(range(1, len(EXAMPLE_NODES) + 1))
    sampled = [True] * len(EXAMPLE_NODES)
    return GcsaIndex.from_layout(DNA, specs, ids, sampled,
                                 sample_rate=sample_rate)


def example_prefixes():
    return [prefix for prefix, _, _ in EXAMPLE_NODES]
