"""GCSA: a succinct path index for recombinant sequence graphs.

Builds a BWT-style index over a prefix-range-sorted automaton derived
from a multiple sequence alignment, supporting exact and bounded
edit-distance pattern matching against every row-switching path.
"""

from .alignment_builder import AlignmentMatrix, build_automaton, normalize_alignment
from .automaton import Alphabet, Automaton
from .bitvec import BitVector, KERNEL_BACKEND
from .construction import build_sorted_automaton
from .errors import FormatError, GcsaError, InputError, InternalError
from .index import GcsaIndex, NodeRange

__version__ = "0.1.0"

__all__ = [
    "AlignmentMatrix",
    "Alphabet",
    "Automaton",
    "BitVector",
    "FormatError",
    "GcsaError",
    "GcsaIndex",
    "InputError",
    "InternalError",
    "KERNEL_BACKEND",
    "NodeRange",
    "build_automaton",
    "build_sorted_automaton",
    "normalize_alignment",
    "__version__",
]
