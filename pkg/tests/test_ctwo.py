"""c2 invariant: point counts, Dodgson route, flow counting."""
from __future__ import annotations

import pytest

from egperm.ctwo import (BudgetExceeded, c2_at_prime, count_flows, dodgson_c2,
                         dodgson_common_trees, kirchhoff_point_count,
                         min_connected_spanning_with, schwinger_solution_count,
                         spanning_trees)
from egperm.graphcore import (GraphError, Multigraph, banana, catalog,
                              complete_graph, path_graph, wheel)


def test_k3_count_is_p_squared():
    k3 = complete_graph(3)
    for p in (3, 5, 7, 11, 13):
        entry = c2_at_prime(k3, p)
        assert entry.point_count == p * p
        assert entry.c2 == 1


def test_k4_c2_minus_one():
    k4 = catalog("K4")
    for p in (3, 5, 7):
        entry = c2_at_prime(k4, p)
        assert entry.point_count % (p * p) == 0
        assert entry.c2 == p - 1


def test_single_edge_rejected():
    with pytest.raises(GraphError):
        kirchhoff_point_count(banana(2), 3)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        kirchhoff_point_count(catalog("K3_4"), 7)


def test_evaluators_agree():
    corpus = [complete_graph(3),
              Multigraph.build(3, [(0, 1), (0, 1), (1, 2), (0, 2)]),
              Multigraph.build(4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
              Multigraph.build(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]),
              catalog("K4")]
    for g in corpus:
        assert g.edge_count <= 6
        for p in (3, 5, 7):
            a = kirchhoff_point_count(g, p, "tree-sum")
            b = kirchhoff_point_count(g, p, "laplacian-det")
            assert a == b, (g.edges, p)


def test_spanning_tree_count_k4():
    assert len(spanning_trees(catalog("K4"))) == 16


def test_dodgson_matches_c2():
    k4 = catalog("K4")
    for p in (3, 5):
        assert dodgson_c2(k4, p, 0, 1, 2) == c2_at_prime(k4, p).c2
    w4 = wheel(4)
    for p in (3, 5):
        assert dodgson_c2(w4, p, 0, 1, 4) == c2_at_prime(w4, p).c2


def test_dodgson_triple_invariance():
    k4 = catalog("K4")
    vals = {dodgson_c2(k4, 3, a, b, c)
            for a, b, c in ((0, 1, 2), (3, 4, 5), (1, 2, 0), (0, 5, 2))}
    assert vals == {2}


def test_dodgson_polynomial_spot_check():
    # star labels a,b,c at one K4 vertex: the first minor's trees are the
    # three opposite-edge pairs (linear polynomial), the second's is a single
    # opposite edge (a quadratic monomial)
    k4 = catalog("K4")
    assert dodgson_common_trees(k4, {0, 2}, {1, 2}, set()) == [(3, 4), (3, 5), (4, 5)]
    assert dodgson_common_trees(k4, {0}, {1}, {2}) == [(3,)]


def test_dodgson_distinct_edges_required():
    with pytest.raises(GraphError):
        dodgson_c2(catalog("K4"), 3, 0, 0, 1)


def test_k34_c2_zero():
    k34 = catalog("K3_4")
    entry = c2_at_prime(k34, 3)
    assert entry.c2 == 0
    # the 5^12 brute force blows the point budget; the Dodgson route at 3
    # stays inside it and agrees
    assert dodgson_c2(k34, 3, 0, 1, 2) == 0
    with pytest.raises(BudgetExceeded):
        c2_at_prime(k34, 5)


def test_count_flows():
    assert count_flows(catalog("K4"), 3) == 27
    assert count_flows(path_graph(4), 5) == 1
    assert count_flows(banana(2), 5) == 5
    for g, p in ((complete_graph(3), 5), (catalog("K4"), 3)):
        h1 = g.edge_count - g.vertex_count + 1
        assert count_flows(g, p) == p ** h1


def test_schwinger_counts():
    k3 = complete_graph(3)
    assert schwinger_solution_count(k3, 3, [0, 0, 0]) == 27
    nwz = [1, 2, 1]  # cycle flow on edges (0,1),(0,2),(1,2)
    assert schwinger_solution_count(k3, 3, nwz) == 9
    assert min_connected_spanning_with(k3, []) == 2
    k4 = catalog("K4")
    flow = [1, 2, 0, 1, 0, 0]  # cycle 0-1-2 with three zero edges
    k = min_connected_spanning_with(k4, [2, 4, 5])
    assert schwinger_solution_count(k4, 3, flow) == 3 ** k == 27


def test_schwinger_invalid_flow():
    with pytest.raises(GraphError):
        schwinger_solution_count(complete_graph(3), 3, [1, 0, 0])
