import random

import networkx as nx
import pytest

from ktcount.errors import CapacityError
from ktcount.graph import (
    LabeledGraph,
    complete_graph,
    cycle_graph,
    empty_graph,
    graph_from_index,
    num_pairs,
    path_graph,
)
from ktcount.widths import (
    PROPER_PATHWIDTH_MAX_N,
    ProperPathDecomposition,
    check_ppd,
    is_partial_ktree,
    is_partial_ktree_by_completion,
    pathwidth_exact,
    proper_path_decomposition,
    proper_pathwidth_exact,
    treewidth_exact,
    width_report,
)
from oracles import brute_pathwidth, brute_proper_pathwidth, brute_treewidth, is_forest_nx


def _all(n):
    return [graph_from_index(n, c) for c in range(1 << num_pairs(n))]


SMALL = [g for n in range(1, 6) for g in _all(n)]


def test_treewidth_examples():
    assert treewidth_exact(complete_graph(4)) == 3
    assert treewidth_exact(path_graph(5)) == 1
    assert treewidth_exact(cycle_graph(5)) == 2


def test_partial_ktree_examples():
    assert is_partial_ktree(path_graph(6), 1)
    assert is_partial_ktree(empty_graph(4), 1)
    assert not is_partial_ktree(complete_graph(5), 3)
    assert is_partial_ktree(cycle_graph(5), 2)


def test_pathwidth_examples():
    assert pathwidth_exact(complete_graph(4)) == 3
    star = LabeledGraph.from_edges(4, [(1, 2), (1, 3), (1, 4)])
    assert pathwidth_exact(star) == 1
    # the 7-vertex complete binary tree is a caterpillar (spine 4-2-1-3-7)
    binary = LabeledGraph.from_edges(7, [(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)])
    assert pathwidth_exact(binary) == brute_pathwidth(binary) == 1
    # smallest tree of pathwidth 2: a spider with three legs of length 2
    spider = LabeledGraph.from_edges(7, [(1, 2), (2, 3), (1, 4), (4, 5), (1, 6), (6, 7)])
    assert pathwidth_exact(spider) == brute_pathwidth(spider) == 2


@pytest.mark.parametrize("k", range(1, 5))
def test_ppw_clique(k):
    assert proper_pathwidth_exact(complete_graph(k + 1)) == k


def test_ppw_examples():
    assert proper_pathwidth_exact(path_graph(4)) == 1
    assert brute_proper_pathwidth(path_graph(4)) == 1
    assert proper_pathwidth_exact(cycle_graph(4)) == 2
    assert brute_proper_pathwidth(cycle_graph(4)) == 2


def test_check_ppd_examples():
    k3 = complete_graph(3)
    assert check_ppd(k3, ProperPathDecomposition.of([{1, 2, 3}]))
    p3 = path_graph(3)
    assert check_ppd(p3, ProperPathDecomposition.of([{1, 2}, {2, 3}]))
    r = check_ppd(p3, ProperPathDecomposition.of([{1, 2, 3}, {1, 2, 3}]))
    assert not r and r.condition == "C1"


def test_check_ppd_each_condition():
    p4 = path_graph(4)
    assert check_ppd(p4, ProperPathDecomposition.of([{1, 2}, {2, 3}])).condition == "C2"
    assert check_ppd(p4, ProperPathDecomposition.of([{1, 2}, {3, 4}])).condition == "C3"
    c4 = ProperPathDecomposition.of([{1, 2}, {2, 3}, {1, 3, 4}])
    assert check_ppd(LabeledGraph.from_edges(4, [(1, 2), (2, 3)]), c4).condition == "C4"
    # X_1 & X_3 = {1, 2} is inside X_2 but |X_2| - 2 = 1
    c5 = ProperPathDecomposition.of([{1, 2, 3}, {1, 2, 4}, {1, 2, 5}])
    g = LabeledGraph.from_edges(5, [(1, 2)])
    r = check_ppd(g, c5)
    assert not r and r.condition == "C5" and r.witness == (0, 1, 2)


def test_degenerate_single_vertex():
    g = empty_graph(1)
    assert width_report(g) == (0, 0, 0) or (
        width_report(g).tw, width_report(g).pw, width_report(g).ppw) == (0, 0, 0)
    assert proper_path_decomposition(g).bags == (frozenset({1}),)


def test_widths_exhaustive_against_brute_force():
    for g in SMALL:
        tw, pw, ppw = treewidth_exact(g), pathwidth_exact(g), proper_pathwidth_exact(g)
        assert tw == brute_treewidth(g), g
        assert pw == brute_pathwidth(g), g
        assert ppw == brute_proper_pathwidth(g), g
        assert ppw >= pw >= tw


def test_ppd_certificates_valid_exhaustive():
    for g in SMALL:
        d = proper_path_decomposition(g)
        assert check_ppd(g, d), g
        assert d.width == proper_pathwidth_exact(g)


def test_treewidth_extremes():
    for g in SMALL:
        tw = treewidth_exact(g)
        assert (tw == g.n - 1) == (g == complete_graph(g.n))
        assert (tw == 0) == (g.num_edges == 0)


def test_forest_iff_tw_at_most_one():
    for g in SMALL:
        assert is_partial_ktree(g, 1) == is_forest_nx(g)


def test_monotone_under_edge_removal():
    for g in SMALL:
        w = (treewidth_exact(g), pathwidth_exact(g), proper_pathwidth_exact(g))
        for e in g.edges:
            h = LabeledGraph.from_edges(g.n, [x for x in g.edges if x != e])
            w2 = (treewidth_exact(h), pathwidth_exact(h), proper_pathwidth_exact(h))
            assert all(a <= b for a, b in zip(w2, w)), (g, e)


def test_recognizers_agree():
    for g in SMALL:
        for k in range(0, g.n):
            assert is_partial_ktree(g, k) == is_partial_ktree_by_completion(g, k)


def test_random_mid_size_against_brute_force():
    rng = random.Random(2024)
    for _ in range(12):
        n = rng.choice([6, 7])
        g = graph_from_index(n, rng.getrandbits(num_pairs(n)))
        assert treewidth_exact(g) == brute_treewidth(g)
        assert pathwidth_exact(g) == brute_pathwidth(g)


def test_treewidth_matches_networkx_on_chordal_graphs():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(3, 11)
        g = graph_from_index(n, rng.getrandbits(num_pairs(n)))
        h = nx.Graph()
        h.add_nodes_from(range(1, n + 1))
        h.add_edges_from(g.edges)
        if nx.is_chordal(h):
            assert treewidth_exact(g) == max(len(c) for c in nx.find_cliques(h)) - 1


def test_caps():
    with pytest.raises(CapacityError):
        proper_pathwidth_exact(empty_graph(PROPER_PATHWIDTH_MAX_N + 1))


def test_decomposition_json_round_trip():
    d = proper_path_decomposition(cycle_graph(5))
    assert ProperPathDecomposition.from_json(d.to_json()) == d
