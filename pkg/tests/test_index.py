import random

import pytest

from gcsa.alignment_builder import AlignmentMatrix, build_automaton
from gcsa.automaton import (
    DNA,
    chain_automaton,
    naive_find,
    prefix_occurrence_map,
    suffixes_from,
)
from gcsa.bitvec import op_counter
from gcsa.construction import build_sorted_automaton
from gcsa.errors import FormatError, InputError
from gcsa.index import GcsaIndex, NodeRange, build_index
from tests.fixtures import EXAMPLE_NODES, example_index, example_prefixes
from tests.test_alignment_builder import random_alignment


def index_for(am_or_text, m=1, ids="origin", sample_rate=16):
    """Index plus its sorted automaton; ids='origin' locates origin nodes."""
    if isinstance(am_or_text, str):
        auto = chain_automaton(am_or_text)
    else:
        auto = build_automaton(am_or_text, m=m)
    sa, _, _ = build_sorted_automaton(auto)
    id_values = sa.node_from if ids == "origin" else None
    ix = GcsaIndex.from_automaton(sa, ids=id_values, sample_rate=sample_rate)
    return ix, sa, auto


def found_origins(ix, r):
    """Node values of a find range (origin ids when ids='origin')."""
    return set(ix.locate_all(r)) if r is not None else set()


# -- the 18-node worked example ---------------------------------------


def test_example_counts():
    ix = example_index()
    assert ix.node_count == 18
    assert ix.edge_count == 22
    assert ix.bwt_length == 25
    assert ix.bwt_length <= 2 * ix.edge_count - ix.node_count + 2 == 28


def test_example_c_array():
    ix = example_index()
    assert ix.C == [0, 1, 7, 11, 16, 21, 22]


def test_example_node_labels():
    ix = example_index()
    for ordinal, (prefix, _, _) in enumerate(EXAMPLE_NODES, start=1):
        r = ix.node_range(ordinal)
        assert ix.node_label_char(r) == prefix[0]


def test_example_navigation_facts():
    ix = example_index()
    prefixes = example_prefixes()
    rng_of = {p: ix.node_range(i + 1) for i, p in enumerate(prefixes)}
    # psi(GA) = {ACG, ACTA, AT}; GA's range is [15, 17]
    assert rng_of["GA"] == NodeRange(15, 17)
    got = set(ix.psi(rng_of["GA"]))
    assert got == {rng_of["ACG"], rng_of["ACTA"], rng_of["AT"]}
    # psi(TA) = {ACC, ACTG, AG}
    assert set(ix.psi(rng_of["TA"])) == \
        {rng_of["ACC"], rng_of["ACTG"], rng_of["AG"]}
    # psi(#) = {GA}: the automaton starts with G then A
    assert set(ix.psi(rng_of["#"])) == {rng_of["GA"]}
    # the final node has no successors (its 1-bit is the wraparound)
    assert ix.psi(rng_of["$"]) == []
    # LF inverses
    assert ix.lf(rng_of["ACG"], "G") == rng_of["GA"]
    assert ix.lf(rng_of["CTG"], "A") == rng_of["ACTG"]
    assert ix.lf(rng_of["CTG"], "C") == rng_of["CC"]
    assert ix.lf(rng_of["TG$"], "C") == rng_of["CTG"]
    assert ix.lf(rng_of["$"], "G") == rng_of["G$"]
    # absent character in range
    assert ix.lf(rng_of["$"], "A") is None
    # '$' is not a steppable edge label
    with pytest.raises(InputError):
        ix.lf(rng_of["#"], "$")


def test_example_full_inversion_walk():
    ix = example_index()
    edges = []
    for ordinal in range(1, ix.node_count + 1):
        u = ix.node_range(ordinal)
        for v in ix.psi(u):
            assert ix.lf(v, ix.node_label(u)) == u
            edges.append((u, v))
    # every non-empty BWT character is accounted for by exactly one edge,
    # minus the wraparound (psi of the final node is empty)
    assert len(edges) == ix.edge_count - 1
    assert len(set(edges)) == len(edges)


def test_example_prefixes_recovered_by_naive_checker():
    # rebuild the explicit automaton by walking the index, then confirm
    # the naive checker reproduces exactly the published node prefixes
    from gcsa.automaton import (
        Automaton,
        is_prefix_range_sorted_naive,
        is_prefix_sorted_naive,
    )

    ix = example_index()
    auto = Automaton(DNA)
    for ordinal in range(1, ix.node_count + 1):
        auto.add_node(ix.node_label(ix.node_range(ordinal)))
    for ordinal in range(1, ix.node_count + 1):
        u = ix.node_range(ordinal)
        for v in ix.psi(u):
            auto.add_edge(ordinal - 1, ix.node_ordinal(v) - 1)
    ok, prefixes = is_prefix_sorted_naive(auto)
    assert ok
    assert [prefixes[v] for v in range(auto.node_count)] == example_prefixes()
    assert is_prefix_range_sorted_naive(auto)


def test_example_find():
    ix = example_index()
    prefixes = example_prefixes()
    rng_of = {p: ix.node_range(i + 1) for i, p in enumerate(prefixes)}
    assert ix.find("TA") == rng_of["TA"]
    assert ix.find("ACT") == NodeRange(rng_of["ACTA"].sp, rng_of["ACTG"].ep)
    assert ix.find("") == NodeRange(1, 25)
    assert ix.find("TT") is None
    with pytest.raises(InputError):
        ix.find("A$")
    with pytest.raises(InputError):
        ix.find("AN")


def test_example_stats_and_serialization():
    ix = example_index()
    st = ix.stats()
    assert (st["nodes"], st["edges"], st["bwt_length"]) == (18, 22, 25)
    data = ix.to_bytes()
    again = GcsaIndex.from_bytes(data)
    assert again.to_bytes() == data
    assert again.C == ix.C
    assert again.find("TA") == ix.find("TA")


# -- built indexes ------------------------------------------------------


def test_chain_layout_and_queries():
    ix, sa, auto = index_for("AC")
    # nodes in rank order: $, AC$, C$, #; BWT = C, #, A, $
    assert ix.node_count == 4
    assert ix.edge_count == 4  # 3 real + wraparound
    assert ix.bwt_length == 4
    assert ix.find("AC") is not None
    assert ix.find("CA") is None
    # locate returns origin node ids; map through values for positions
    r = ix.find("C")
    assert found_origins(ix, r) == naive_find(auto, "C")


def test_find_matches_oracle_on_fuzzed_alignments():
    rng = random.Random(101)
    for _ in range(30):
        am = random_alignment(rng, n=rng.randint(3, 12))
        m = rng.choice([0, 1, 2, 4])
        ix, sa, auto = index_for(am, m=m)
        occ = prefix_occurrence_map(auto, 4)
        # frontier sweep: every pattern where either side is non-empty
        frontier = [""]
        for _ in range(4):
            nxt = []
            for suffix in frontier:
                for ch in "ACGT":
                    pattern = ch + suffix
                    got = found_origins(ix, ix.find(pattern))
                    want = occ.get(pattern, set())
                    assert got == want, (am.rows, m, pattern)
                    if got:
                        nxt.append(pattern)
            frontier = nxt


def test_lf_psi_inversion_on_fuzzed_indexes():
    rng = random.Random(103)
    for _ in range(25):
        am = random_alignment(rng, n=rng.randint(3, 10))
        ix, sa, auto = index_for(am, m=rng.choice([0, 1, 2]))
        ranges = [ix.node_range(o) for o in range(1, ix.node_count + 1)]
        # psi agrees with the explicit edge table
        succ = {}
        for (u, v) in sa.edges:
            succ.setdefault(u, set()).add(v)
        for u in range(ix.node_count):
            got = {ranges.index(r) for r in ix.psi(ranges[u])}
            assert got == succ.get(u, set())
            for v in got:
                assert ix.lf(ranges[v], sa.node_labels[u]) == ranges[u]
        # labels agree with the sorted automaton
        for u in range(ix.node_count):
            assert ix.node_label(ranges[u]) == sa.node_labels[u]


def test_locate_sampling_and_walk():
    # node-id value scheme: forced samples everywhere relevant
    ix, sa, auto = index_for("GATTACA", ids="origin")
    for ordinal in range(1, ix.node_count + 1):
        r = ix.node_range(ordinal)
        assert ix.locate(r) == sa.node_from[ordinal - 1]


def test_locate_with_default_column_ids_single_row():
    auto = chain_automaton("GATTACA")
    sa, _, _ = build_sorted_automaton(auto)
    ix = GcsaIndex.from_automaton(sa, sample_rate=4)  # default ids: columns
    full = "#GATTACA$"
    for ordinal in range(1, ix.node_count + 1):
        r = ix.node_range(ordinal)
        col = ix.locate(r)
        assert full[col - 1] == ix.node_label_char(r)


def test_locate_walk_respects_sample_rate_bound():
    # long run of id+1 nodes with a sparse sample rate
    auto = chain_automaton("A" * 100 + "C" * 100)
    sa, _, _ = build_sorted_automaton(auto)
    for d in (1, 4, 16, 64):
        ix = GcsaIndex.from_automaton(sa, sample_rate=d)
        for ordinal in range(1, ix.node_count + 1):
            r = ix.node_range(ordinal)
            expected_col = sa.source.values[sa.node_from[ordinal - 1]]
            assert ix.locate(r) == expected_col  # guard raises if > d steps


def test_display():
    ix, sa, auto = index_for("ACGT")
    # first alphabet node: origin with label A
    first = next(o for o in range(1, ix.node_count + 1)
                 if ix.node_label_char(ix.node_range(o)) == "A")
    r = ix.node_range(first)
    assert ix.display(r, 0) == ""
    assert ix.display(r, 3) == "ACG"
    assert ix.display(r, 99) == "ACGT$"  # stops at the final node
    am = AlignmentMatrix(["AT", "CT"])
    ix2, sa2, auto2 = index_for(am, m=1)
    merged_t = next(o for o in range(1, ix2.node_count + 1)
                    if ix2.node_label_char(ix2.node_range(o)) == "T")
    # branching stops display after the label itself when out-degree > 1
    start = ix2.node_range(ix2.node_ordinals(ix2.find("AT"))[0])
    text = ix2.display(start, 4)
    assert text.startswith("AT")


def test_display_fuzz_prefix_of_some_suffix():
    rng = random.Random(107)
    for _ in range(15):
        am = random_alignment(rng, n=rng.randint(3, 8))
        ix, sa, auto = index_for(am, m=1)
        for ordinal in range(1, ix.node_count + 1):
            r = ix.node_range(ordinal)
            out = ix.display(r, 5)
            suffixes = suffixes_from(auto, sa.node_from[ordinal - 1])
            assert any(s.startswith(out) for s in suffixes)


def test_find_operation_budget():
    ix, sa, auto = index_for(
        AlignmentMatrix(["ACGTACGTACGT", "ACCTACGTAGGT"]), m=2)
    rng = random.Random(5)
    for _ in range(200):
        length = rng.randint(1, 10)
        pattern = "".join(rng.choice("ACGT") for _ in range(length))
        op_counter.reset()
        ix.find(pattern)
        assert op_counter.count <= 6 * length


def test_index_serialization_round_trip_and_errors():
    ix, sa, auto = index_for(AlignmentMatrix(["ACGT", "AGGT"]), m=1)
    data = ix.to_bytes()
    again = GcsaIndex.from_bytes(data)
    assert again.to_bytes() == data
    for pattern in ("A", "GG", "ACGT", "TTT"):
        a = ix.find(pattern)
        b = again.find(pattern)
        assert a == b
        if a is not None:
            assert ix.locate_all(a) == again.locate_all(b)
    with pytest.raises(FormatError):
        GcsaIndex.from_bytes(b"")
    with pytest.raises(FormatError):
        GcsaIndex.from_bytes(b"XXXX" + data[4:])
    with pytest.raises(FormatError):
        GcsaIndex.from_bytes(data[:-3])


def test_bwt_length_bound_on_fuzzed_builds():
    rng = random.Random(109)
    for _ in range(20):
        am = random_alignment(rng, n=rng.randint(3, 12))
        ix, _, _ = index_for(am, m=rng.choice([0, 1, 2, 4]))
        assert ix.bwt_length <= 2 * ix.edge_count - ix.node_count + 2


def test_invalid_build_inputs():
    auto = chain_automaton("ACGT")
    sa, _, _ = build_sorted_automaton(auto)
    with pytest.raises(InputError):
        GcsaIndex.from_automaton(sa, sample_rate=0)
    with pytest.raises(InputError):
        GcsaIndex.from_automaton(sa, ids=[1, 2])  # wrong length
    with pytest.raises(InputError):
        GcsaIndex.from_automaton(sa, verify="bogus")


def test_build_index_convenience():
    ix, info = build_index(AlignmentMatrix(["ACGT"]), m=4)
    assert ix.node_count == 6
    assert ix.edge_count == 6  # 5 real edges + wraparound
    assert info["rounds"] >= 0
    assert info["peak_nodes"] >= 6
