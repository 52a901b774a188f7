import random

import pytest

from tdcycles.graph import Graph, complete_graph, cycle_graph, disjoint_union, path_graph, petersen_graph
from tdcycles.oracle import (
    OracleGuardError,
    cycle_lengths,
    decide_pcc_exact,
    enumerate_cycle_covers,
    enumerate_pairs,
    eval_inclusion_exclusion,
    iter_cycle_covers,
    longest_path_vertices,
)

from _graphs import all_labeled_graphs, random_weights


class TestPairs:
    def test_c4(self):
        assert enumerate_pairs(cycle_graph(4), None, 4) == {4: 2}

    def test_triangle(self):
        assert enumerate_pairs(complete_graph(3), None, 2) == {}

    def test_ell_zero(self):
        assert enumerate_pairs(path_graph(3), None, 0) == {0: 1}

    def test_weighted_c4(self):
        # the two perfect matchings weigh 1+3 and 2+4; each is M1 once
        assert enumerate_pairs(cycle_graph(4), [1, 2, 3, 4], 4) == {10: 2}

    def test_guard(self):
        with pytest.raises(OracleGuardError):
            enumerate_pairs(cycle_graph(15), None, 2)


class TestInclusionExclusion:
    def test_triangle(self):
        assert all(eval_inclusion_exclusion(complete_graph(3), None, 2, w) == 0 for w in range(5))

    def test_c4(self):
        assert eval_inclusion_exclusion(cycle_graph(4), None, 4, 4) == 2

    def test_empty(self):
        assert eval_inclusion_exclusion(path_graph(3), None, 0, 0) == 1

    def test_agrees_with_pairs(self):
        r = random.Random(1)
        for g in all_labeled_graphs(4):
            w = random_weights(g, r, 3)
            for ell in (0, 2, 4):
                table = enumerate_pairs(g, w, ell)
                for wt in range(0, 13):
                    assert eval_inclusion_exclusion(g, w, ell, wt) == table.get(wt, 0)

    def test_guard(self):
        with pytest.raises(OracleGuardError):
            eval_inclusion_exclusion(cycle_graph(6), None, 2, 2)


class TestCovers:
    def test_c4(self):
        assert enumerate_cycle_covers(cycle_graph(4), 4, 1).count == 1

    def test_two_triangles(self):
        g = disjoint_union(complete_graph(3), complete_graph(3))
        assert enumerate_cycle_covers(g, 6, 1).count == 0
        assert enumerate_cycle_covers(g, 6, 2).count == 1

    def test_path(self):
        assert enumerate_cycle_covers(path_graph(4), 4, 1).count == 0

    def test_k4_census(self):
        c = enumerate_cycle_covers(complete_graph(4), 4, 1)
        assert (c.count, c.cycle_counts, c.even_pair_total) == (3, [1, 1, 1], 6)

    def test_covers_are_two_regular(self):
        for g in all_labeled_graphs(5):
            for cov in iter_cycle_covers(g):
                deg = [0] * (g.n + 1)
                for i in cov.edges:
                    for x in g.edges[i]:
                        deg[x] += 1
                assert all(d in (0, 2) for d in deg)
                assert cov.vertices == sum(1 for d in deg if d)

    def test_bipartite_covers_are_even(self):
        for g in all_labeled_graphs(5):
            if g.is_bipartite():
                assert all(c.all_even for c in iter_cycle_covers(g))


class TestDecide:
    def test_c6(self):
        assert decide_pcc_exact(cycle_graph(6), 1, 6)
        assert not decide_pcc_exact(cycle_graph(6), 1, 4)

    def test_empty_cover(self):
        assert decide_pcc_exact(Graph(0, ()), 0, 0)
        assert decide_pcc_exact(cycle_graph(5), 0, 0)

    def test_petersen_not_hamiltonian(self):
        assert not decide_pcc_exact(petersen_graph(), 1, 10)
        assert decide_pcc_exact(petersen_graph(), 2, 10)

    def test_guard(self):
        with pytest.raises(OracleGuardError):
            decide_pcc_exact(cycle_graph(15), 1, 15)


def test_longest_path():
    assert longest_path_vertices(path_graph(5)) == 5
    assert longest_path_vertices(Graph.from_edges(4, [(1, 2), (1, 3), (1, 4)])) == 3
    assert longest_path_vertices(Graph(0, ())) == 0
    assert longest_path_vertices(Graph(2, ())) == 1


def test_cycle_lengths():
    assert cycle_lengths(complete_graph(4)) == {3, 4}
    assert cycle_lengths(path_graph(5)) == set()
    assert cycle_lengths(petersen_graph()) == {5, 6, 8, 9}
