"""Command line front end: build, query, stats, simulate.

Exit codes: 0 success, 1 input error, 2 format error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .alignment_builder import parse_alignment
from .automaton import Alphabet
from .errors import FormatError, InputError, InternalError
from .index import GcsaIndex, build_index
from .matcher import ReadBatch, approximate_batch, exact_batch
from .sim import (
    RandomModelParams,
    report_to_csv,
    run_growth_experiment,
)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="gcsa",
        description="Succinct path index over multiple-alignment graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="index a multiple alignment")
    b.add_argument("alignment", help="alignment file (rows or FASTA)")
    b.add_argument("-o", "--output", required=True, help="index output path")
    b.add_argument("--context-length", type=int, default=4, metavar="M",
                   help="merge context length (default 4)")
    b.add_argument("--sample-rate", type=int, default=16, metavar="D",
                   help="locate sample rate (default 16)")
    b.add_argument("--alphabet", default="ACGT",
                   help="alphabet letters (default ACGT)")
    b.add_argument("--verify", choices=["none", "edges", "full"],
                   default="edges",
                   help="post-build verification level (default edges)")
    b.add_argument("--dump-rounds", metavar="CSV",
                   help="write per-round construction counts to a CSV file")
    b.add_argument("--no-timestamps", action="store_true",
                   help="omit wall time from the summary (test mode)")

    q = sub.add_parser("query", help="match reads against an index")
    q.add_argument("index", help="index file")
    q.add_argument("reads", help="FASTA/FASTQ reads")
    q.add_argument("-k", "--max-edit", type=int, default=0, metavar="K",
                   help="maximum edit distance (default 0, exact)")
    q.add_argument("--no-reverse-complement", action="store_true",
                   help="search the forward strand only")

    s = sub.add_parser("stats", help="report index statistics")
    s.add_argument("index", help="index file")
    s.add_argument("--json", action="store_true", help="machine readable")

    m = sub.add_parser("simulate",
                       help="growth experiment on the random model")
    m.add_argument("--n", type=int, default=1000, help="reference length")
    m.add_argument("--p", type=float, default=0.01, help="mutation rate")
    m.add_argument("--sigma", type=int, default=4, help="alphabet size")
    m.add_argument("--trials", type=int, default=30)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--assert-theorem", action="store_true",
                   help="require the tail-bound regime p < sigma^(1/3) - 1")
    m.add_argument("--output", help="CSV output path (default stdout)")
    return parser


def cmd_build(args):
    try:
        with open(args.alignment) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read alignment: {exc}") from exc
    if args.context_length < 0:
        raise InputError("context length must be >= 0")
    if args.sample_rate < 1:
        raise InputError("sample rate must be >= 1")
    alignment = parse_alignment(text, Alphabet(args.alphabet.upper()))

    rounds_log = []

    def instrument(h, records):
        rounds_log.append((h, records))

    ix, info = build_index(
        alignment, m=args.context_length, sample_rate=args.sample_rate,
        verify=args.verify,
        instrument=instrument if args.dump_rounds else None)
    data = ix.to_bytes()
    with open(args.output, "wb") as fh:
        fh.write(data)
    if args.dump_rounds:
        from .construction import round_stats
        auto = info["automaton"]
        with open(args.dump_rounds, "w") as fh:
            fh.write("round,nodes,edges,unsorted\n")
            for h, records in rounds_log:
                st = round_stats(records, auto)
                fh.write(f"{h},{st['nodes']},{st['edges']},"
                         f"{st['unsorted']}\n")
    st = ix.stats()
    lines = [
        f"nodes\t{st['nodes']}",
        f"edges\t{st['edges']}",
        f"bwt_length\t{st['bwt_length']}",
        f"peak_intermediate_nodes\t{info['peak_nodes']}",
        f"doubling_rounds\t{info['rounds']}",
        f"index_bytes\t{len(data)}",
    ]
    if not args.no_timestamps:
        lines.append(f"wall_time_s\t{info['wall_time']:.3f}")
    print("\n".join(lines))
    return 0


def _load_index(path):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read index: {exc}") from exc
    return GcsaIndex.from_bytes(data)


def cmd_query(args):
    ix = _load_index(args.index)
    try:
        with open(args.reads) as fh:
            batch = ReadBatch.from_text(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read reads: {exc}") from exc
    if args.max_edit < 0:
        raise InputError("maximum edit distance must be >= 0")
    reverse = not args.no_reverse_complement
    if args.max_edit == 0:
        results = exact_batch(ix, batch, reverse=reverse)
    else:
        results = approximate_batch(ix, batch, args.max_edit, reverse=reverse)
    matched_reads = set()
    for res in results:
        ids = ",".join(str(v) for v in res.ids)
        print(f"{res.name}\t{res.strand}\t{res.distance}\t{res.count}\t{ids}")
        matched_reads.add(res.name)
    print(f"reads\t{len(batch.reads)}", file=sys.stderr)
    print(f"matched\t{len(matched_reads)}", file=sys.stderr)
    return 0


def cmd_stats(args):
    ix = _load_index(args.index)
    st = ix.stats()
    if args.json:
        print(json.dumps(st, indent=2, sort_keys=True))
    else:
        print(f"nodes\t{st['nodes']}")
        print(f"edges\t{st['edges']}")
        print(f"bwt_length\t{st['bwt_length']}")
        print(f"sigma\t{st['sigma']}")
        print(f"sample_rate\t{st['sample_rate']}")
        print(f"sample_count\t{st['sample_count']}")
        for name, size in sorted(st["components"].items()):
            print(f"bytes[{name}]\t{size}")
        print(f"component_bytes\t{st['component_bytes']}")
    return 0


def cmd_simulate(args):
    params = RandomModelParams(n=args.n, p=args.p, sigma=args.sigma,
                               seed=args.seed, trials=args.trials)
    if args.assert_theorem and not params.theorem_regime():
        raise InputError(
            f"mutation rate {params.p} violates p < sigma^(1/3) - 1 "
            f"for sigma={params.sigma}")
    report = run_growth_experiment(params)
    csv_text = report_to_csv(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


_COMMANDS = {
    "build": cmd_build,
    "query": cmd_query,
    "stats": cmd_stats,
    "simulate": cmd_simulate,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
