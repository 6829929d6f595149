import math
import random

import numpy as np
import pytest

from ktcount.construction import (
    ConstructibleTriple,
    audit_cell,
    build_graph,
    compute_D_sets,
    count_preimages,
    count_triples,
    distinct_graphs,
    enumerate_triples,
    grid_row,
    min_neighbourhood,
    ppd_witness,
    preimage_counts,
    reconstruct_blocks,
    sample_triple,
    sigmas,
    skeletons,
    triple_count_lower_bound,
    validate_triple,
)
from ktcount.bounds import preimage_bound
from ktcount.errors import CapacityError, ConsistencyError, ReconstructionError, TripleValidationError
from ktcount.graph import LabeledGraph, complete_graph, empty_graph
from ktcount.widths import check_ppd, is_partial_ktree, proper_pathwidth_exact
from oracles import graph_edges, recursive_triples

fs = frozenset


def T(n, k, s, sigma, f, N, strict=False):
    return ConstructibleTriple(n, k, s, tuple(sigma), tuple(f), tuple(fs(x) for x in N), strict)


STAR = LabeledGraph.from_edges(3, [(1, 2), (1, 3)])


def test_validate_examples():
    trace = validate_triple(T(3, 2, 1, (1, 2, 3), (), [{1}, {1}]))
    assert trace.active(3) == {1, 2} and trace.anchor(3) == 1
    with pytest.raises(TripleValidationError) as e:
        validate_triple(T(3, 2, 1, (1, 2, 3), (), [set(), {1}]))
    assert e.value.constraint == "1 in N(i)" and e.value.step == 2


def test_validate_rejects_wrong_frozen_at_block_start():
    good = next(enumerate_triples(5, 2, 1))
    validate_triple(good)
    assert good.frozen(4) == 1
    bad = ConstructibleTriple(5, 2, 1, good.sigma, (2,) + good.f[1:], good.N)
    with pytest.raises(TripleValidationError) as e:
        validate_triple(bad)
    assert e.value.step == 4 and "block start" in e.value.constraint


def test_validate_rejects_small_neighbourhood():
    t = next(enumerate_triples(5, 3, 1))
    N = list(t.N)
    N[5 - 2] = fs({min(t.N[5 - 2])})  # just the anchor
    with pytest.raises(TripleValidationError) as e:
        validate_triple(ConstructibleTriple(5, 3, 1, t.sigma, t.f, tuple(N)))
    assert e.value.constraint == "|N(i)| > (k+1)/2"


def test_build_graph_examples():
    assert build_graph(T(3, 2, 1, (1, 2, 3), (), [{1}, {1, 2}])) == complete_graph(3)
    assert build_graph(T(3, 2, 1, (1, 2, 3), (), [{1}, {1}])) == STAR
    assert build_graph(T(3, 2, 1, (1, 3, 2), (), [{1}, {1}])) == STAR


def test_ppd_witness_example():
    d = ppd_witness(T(3, 2, 1, (1, 2, 3), (), [{1}, {1, 2}]))
    assert d.bags == (fs({1, 2, 3}),) and d.width == 2


def test_enumerate_small_examples():
    assert count_triples(3, 2, 1) == 4
    assert len(list(enumerate_triples(3, 2, 1))) == 4
    for k in range(2, 5):
        assert count_triples(k + 1, k, 1) == math.factorial(k) * 2 ** (k * (k - 1) // 2)


@pytest.mark.parametrize("n,k,s", [(5, 2, 2), (5, 3, 1), (6, 2, 3), (6, 3, 2), (5, 2, 1), (4, 3, 2)])
def test_enumeration_matches_recursive_oracle(n, k, s):
    mine = {(t.sigma, t.f, t.N) for t in enumerate_triples(n, k, s)}
    ref = recursive_triples(n, k, s, min_neighbourhood(k))
    assert len(ref) == len(set(ref)) == len(mine)
    assert mine == set(ref)
    for sigma, f, N in random.Random(n * 100 + k * 10 + s).sample(ref, min(50, len(ref))):
        g = build_graph(ConstructibleTriple(n, k, s, sigma, f, N))
        assert set(map(frozenset, g.edges)) == graph_edges(sigma, N)


def test_enumeration_order_is_documented():
    ts = list(enumerate_triples(5, 2, 2))
    keys = [t.sigma for t in ts]
    assert keys == sorted(keys)
    assert [t.sigma for t in ts[:: len(skeletons(5, 2, 2))]] == list(sigmas(5))


def test_lower_bound_examples():
    assert triple_count_lower_bound(3, 2, 1) == 4
    assert triple_count_lower_bound(4, 3, 1) == 48
    assert triple_count_lower_bound(5, 2, 2) <= count_triples(5, 2, 2)


def test_strict_rule_changes_count_only_for_odd_k():
    assert min_neighbourhood(2) == min_neighbourhood(2, strict=True) == 2
    assert (min_neighbourhood(3), min_neighbourhood(3, strict=True)) == (2, 3)
    assert count_triples(5, 3, 1) == 576
    assert count_triples(5, 3, 1, strict=True) == 192
    assert count_triples(5, 3, 1, strict=True) < triple_count_lower_bound(5, 3, 1)
    ref = recursive_triples(5, 3, 1, min_neighbourhood(3, strict=True))
    assert len(ref) == 192


def test_distinct_graphs_example():
    graphs, R = distinct_graphs(3, 2, 1)
    assert R == 2 and graphs == {STAR, complete_graph(3)}


@pytest.mark.parametrize("n,k,s", [(5, 2, 1), (5, 3, 2), (6, 3, 3), (6, 2, 2)])
def test_distinct_graphs_are_partial_ktrees(n, k, s):
    graphs, _ = distinct_graphs(n, k, s)
    for g in graphs:
        assert is_partial_ktree(g, k)
        assert proper_pathwidth_exact(g) <= k


def test_d_sets_example():
    t = T(3, 2, 1, (1, 2, 3), (), [{1}, {1, 2}])
    D = compute_D_sets(t, complete_graph(3))
    assert D.sets[3] == {1, 2}
    with pytest.raises(ConsistencyError):
        compute_D_sets(t, STAR)


@pytest.mark.parametrize("n,k,s", [(n, k, s) for n in range(4, 8) for k in (2, 3) for s in (1, 2, 3) if n >= k + 1])
def test_d_sets_every_triple(n, k, s):
    # per triple on n <= 6; every skeleton with two labelings at n = 7
    if n <= 6:
        triples = list(enumerate_triples(n, k, s))
    else:
        rng = random.Random(n + k + s)
        triples = []
        for f, N in skeletons(n, k, s):
            for sigma in (tuple(range(1, n + 1)), (1,) + tuple(rng.sample(range(2, n + 1), n - 1))):
                triples.append(ConstructibleTriple(n, k, s, sigma, f, N))
    for t in triples:
        D = compute_D_sets(t, build_graph(t))
        assert D.is_disjoint()
        assert D.large_product() <= 2**k


def test_count_preimages_examples():
    assert count_preimages(complete_graph(3), 3, 2, 1) == 2
    assert count_preimages(STAR, 3, 2, 1) == 2
    assert count_preimages(empty_graph(3), 3, 2, 1) == 0


@pytest.mark.parametrize("n,k,s", [(5, 3, 2), (6, 3, 3), (6, 2, 1)])
def test_preimage_counts_match_filter(n, k, s):
    counts = preimage_counts(n, k, s)
    rng = random.Random(1)
    for code in rng.sample(sorted(counts), 5):
        assert count_preimages(LabeledGraph(n, code), n, k, s) == counts[code]
    assert max(counts.values()) <= preimage_bound(n, k, s)
    assert len(counts) >= -(-sum(counts.values()) // preimage_bound(n, k, s))


def _replay(t):
    trace = validate_triple(t)
    H = build_graph(t)
    prefix = (1,)
    for b, block in enumerate(trace.blocks()):
        if not block:
            continue
        got, anchor = reconstruct_blocks(H, t.k, t.s, prefix)
        assert got == {t.label(i) for i in block}, (t, prefix)
        if b > 0:
            assert anchor == t.label(trace.anchor(block[0]))
        prefix = prefix + tuple(t.label(i) for i in block)


@pytest.mark.parametrize("n,k,s", [(n, k, s) for n in range(3, 8) for k in (2, 3) for s in (1, 2, 3) if n >= k + 1])
def test_reconstruct_blocks_replay(n, k, s):
    if n <= 6:
        triples = enumerate_triples(n, k, s)
    else:
        rng = random.Random(11)
        triples = (
            ConstructibleTriple(n, k, s, (1,) + tuple(rng.sample(range(2, n + 1), n - 1)), f, N)
            for f, N in skeletons(n, k, s)
        )
    for t in triples:
        _replay(t)


def test_reconstruct_garbage():
    with pytest.raises(ReconstructionError):
        reconstruct_blocks(empty_graph(5), 2, 1, (1,))
    with pytest.raises(ReconstructionError):
        reconstruct_blocks(complete_graph(5), 2, 1, (2,))


@pytest.mark.parametrize("seed", range(20))
def test_sample_triple(seed):
    n, k, s = 7 + seed % 3, 2 + seed % 3, 1 + seed % 3
    t = sample_triple(n, k, s, seed)
    validate_triple(t)
    d = ppd_witness(t)
    assert check_ppd(build_graph(t), d) and d.width == k
    assert sample_triple(n, k, s, seed) == t
    assert sample_triple(n, k, s, np.random.SeedSequence(seed)) == sample_triple(n, k, s, np.random.SeedSequence(seed))


def test_trace_invariants():
    for t in enumerate_triples(6, 3, 2):
        trace = validate_triple(t)
        gone = set()
        for i in range(t.k + 1, t.n + 1):
            A = trace.active(i)
            assert len(A) == t.k
            assert not (A & gone)
            if i >= t.k + 2:
                gone.add(t.frozen(i))


def test_json_round_trip():
    t = sample_triple(8, 3, 2, 5)
    assert ConstructibleTriple.from_json(t.to_json()) == t
    assert ConstructibleTriple.from_dict(t.to_dict()) == t
    st = sample_triple(6, 3, 1, 5, strict=True)
    assert ConstructibleTriple.from_json(st.to_json()).strict


def test_budget_refusal():
    with pytest.raises(CapacityError) as e:
        count_triples(7, 3, 3, cap=1000)
    assert e.value.estimate > 1000


def test_partial_block_flag():
    assert grid_row(5, 2, 3).single_partial_block
    assert not grid_row(5, 2, 1).single_partial_block


def test_audit_cell_parallel_identical():
    assert audit_cell(6, 3, 2, workers=1) == audit_cell(6, 3, 2, workers=3)
