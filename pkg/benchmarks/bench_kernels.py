#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernels on query workloads.

Times rank/select microbenchmarks on the three encodings plus an
end-to-end find() battery, once per available backend.

    python3 benchmarks/bench_kernels.py [--n 200000] [--queries 20000]
"""

import argparse
import random
import time

from gcsa import _kernels_py

try:
    from gcsa import _kernels
except ImportError:
    _kernels = None

from gcsa import bitvec
from gcsa.alignment_builder import AlignmentMatrix
from gcsa.construction import build_sorted_automaton
from gcsa.index import GcsaIndex


def timed(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_bitvectors(n, queries, rng):
    bits = [1 if rng.random() < 0.2 else 0 for _ in range(n)]
    rank_points = [rng.randint(0, n) for _ in range(queries)]
    rows = []
    for encoding in ("plain", "gap", "run-length"):
        bv = bitvec.BitVector.from_bits(bits, encoding=encoding)
        select_points = [rng.randint(1, bv.ones) for _ in range(queries)]

        def do_ranks(bv=bv):
            for i in rank_points:
                bv._rank(i)

        def do_selects(bv=bv):
            for j in select_points:
                bv._select(j)

        rows.append((encoding, timed(do_ranks), timed(do_selects)))
    return rows


def bench_find(rng, reads=2000):
    base = [rng.choice("ACGT") for _ in range(2000)]
    rows = ["".join(base)]
    mutated = base[:]
    for _ in range(20):
        mutated[rng.randrange(len(mutated))] = rng.choice("ACGT")
    rows.append("".join(mutated))
    auto_m = AlignmentMatrix(rows)
    from gcsa.alignment_builder import build_automaton
    sa, _, _ = build_sorted_automaton(build_automaton(auto_m, m=4))
    ix = GcsaIndex.from_automaton(sa, verify="none")
    patterns = []
    joined = rows[0]
    for _ in range(reads):
        start = rng.randrange(len(joined) - 30)
        patterns.append(joined[start:start + 30])

    def run():
        for p in patterns:
            ix.find(p)

    return timed(run, repeat=2)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=200_000)
    parser.add_argument("--queries", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.insert(0, ("cython", _kernels))
    else:
        print("note: compiled kernels unavailable, timing fallback only")

    print(f"bit vector: {args.n} bits, {args.queries} queries per op")
    print(f"{'backend':8} {'encoding':12} {'rank1 (s)':>10} {'select1 (s)':>12}")
    for name, mod in backends:
        bitvec._k = mod
        rng = random.Random(args.seed)
        for encoding, t_rank, t_select in bench_bitvectors(
                args.n, args.queries, rng):
            print(f"{name:8} {encoding:12} {t_rank:10.4f} {t_select:12.4f}")

    print("\nfind(): 2000 patterns of length 30, two-row 2 kbp alignment")
    for name, mod in backends:
        bitvec._k = mod
        rng = random.Random(args.seed)
        print(f"{name:8} {bench_find(rng):10.4f} s")
    bitvec._k = backends[0][1]


if __name__ == "__main__":
    main()
