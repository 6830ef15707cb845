"""
Tests for graph ingestion, generators and structural matrices.
"""
import sys

import numpy as np
import pytest

from config import IRREGULAR_SEEDS, STANDARD_FAMILY
from errors import GraphInputError
from graph_core import (
    Graph,
    adjacency_matrix,
    arc_adjacency_matrix,
    degree_matrix,
    flip_matrix,
    format_edge_list,
    generate,
    load_graph,
    parse_edge_list,
    semi_edge_matrices,
    srw_transition_matrix,
)

TRIANGLE = "3 3\n1 2\n2 3\n3 1\n"


def test_parse_triangle():
    graph = parse_edge_list(TRIANGLE, label='tri')
    assert (graph.n, graph.m) == (3, 3)
    assert graph.arcs[0] == (0, 1)
    assert graph.arcs[3] == (1, 0)
    assert graph.degrees == (2, 2, 2)
    assert graph.label == 'tri'


def test_parse_skips_comments_and_blank_lines():
    text = "# a triangle\n\n3 3\n1 2\n# middle\n2 3\n\n3 1\n"
    assert parse_edge_list(text).arcs == parse_edge_list(TRIANGLE).arcs


def test_parse_reports_line_of_bad_token():
    with pytest.raises(GraphInputError, match="line 2"):
        parse_edge_list("3 3\n1 x\n2 3\n3 1\n")


def test_parse_rejects_duplicate_edge():
    with pytest.raises(GraphInputError, match="duplicate"):
        parse_edge_list("3 3\n1 2\n2 1\n2 3\n")


def test_parse_rejects_self_loop():
    with pytest.raises(GraphInputError, match="self-loop"):
        parse_edge_list("3 3\n1 1\n1 2\n2 3\n")


def test_parse_rejects_out_of_range_vertex():
    with pytest.raises(GraphInputError, match="out of range"):
        parse_edge_list("3 2\n1 2\n2 4\n")


def test_parse_rejects_edge_count_mismatch():
    with pytest.raises(GraphInputError, match="declares 3 edges"):
        parse_edge_list("3 3\n1 2\n2 3\n")


def test_parse_rejects_empty_document():
    with pytest.raises(GraphInputError, match="header"):
        parse_edge_list("# nothing here\n")


def test_disconnected_graph_reports_components():
    with pytest.raises(GraphInputError) as info:
        parse_edge_list("4 2\n1 2\n3 4\n")
    assert info.value.components == 2


def test_arc_involution():
    graph = generate('petersen')
    for j in range(2 * graph.m):
        k = graph.inverse(j)
        assert graph.inverse(k) == j
        assert graph.origin(k) == graph.terminus(j)
        assert graph.terminus(k) == graph.origin(j)


def test_cycle_family():
    graph = generate('cycle', n=5)
    assert graph.label == 'C5'
    assert (graph.n, graph.m) == (5, 5)
    assert graph.regular_degree() == 2
    assert graph.edges()[0] == (0, 1)
    assert graph.edges()[-1] == (4, 0)


def test_complete_and_petersen():
    k4 = generate('complete', n=4)
    assert (k4.n, k4.m, k4.regular_degree()) == (4, 6, 3)
    petersen = generate('petersen')
    assert (petersen.n, petersen.m, petersen.regular_degree()) == (10, 15, 3)


def test_complete_bipartite_partition():
    graph = generate('complete_bipartite', p=2, q=3)
    assert graph.label == 'K2,3'
    assert graph.m == 6
    V, W = graph.bipartition()
    assert V == (0, 1)
    assert W == (2, 3, 4)


def test_odd_cycle_is_not_bipartite():
    assert generate('cycle', n=5).bipartition() is None
    assert generate('complete', n=4).bipartition() is None


def test_path_and_star_are_trees():
    path = generate('path', n=4)
    star = generate('star', leaves=3)
    assert path.is_tree() and star.is_tree()
    np.testing.assert_array_equal(degree_matrix(star), np.diag([3.0, 1.0, 1.0, 1.0]))


def test_random_connected_is_deterministic():
    first = generate('random_connected', n=8, extra_edges=3, seed=13)
    second = generate('random_connected', n=8, extra_edges=3, seed=13)
    assert first.arcs == second.arcs
    assert first.m == 8 - 1 + 3
    assert first.label == 'R8-3-s13'


def test_random_connected_two_vertices():
    graph = generate('random_connected', n=2, extra_edges=0, seed=1)
    assert graph.edges() == [(0, 1)]


def test_irregular_seeds_are_irregular():
    for n, extra, seed in IRREGULAR_SEEDS:
        graph = generate('random_connected', n=n, extra_edges=extra, seed=seed)
        assert graph.n <= 10
        assert graph.regular_degree() is None


def test_generator_errors():
    with pytest.raises(GraphInputError):
        generate('cycle', n=2)
    with pytest.raises(GraphInputError):
        generate('cycle')
    with pytest.raises(GraphInputError):
        generate('star', leaves=0)
    with pytest.raises(GraphInputError, match="unknown graph family"):
        generate('hypercube', n=3)
    with pytest.raises(GraphInputError, match="extra edges"):
        generate('random_connected', n=4, extra_edges=10, seed=0)


def test_standard_family_builds():
    labels = [generate(family, **params).label for _, family, params in STANDARD_FAMILY]
    assert labels == [label for label, _, _ in STANDARD_FAMILY]


def test_adjacency_and_transition():
    graph = generate('random_connected', n=7, extra_edges=4, seed=11)
    A = adjacency_matrix(graph)
    np.testing.assert_array_equal(A, A.T)
    assert A.sum() == 2 * graph.m
    np.testing.assert_allclose(A.sum(axis=1), graph.degrees)
    np.testing.assert_allclose(srw_transition_matrix(graph).sum(axis=1), np.ones(graph.n), atol=1e-15)


def test_arc_adjacency_and_flip():
    graph = generate('cycle', n=3)
    B = arc_adjacency_matrix(graph)
    J = flip_matrix(graph)
    np.testing.assert_array_equal(B.sum(axis=1), np.full(6, 2.0))
    np.testing.assert_array_equal(J @ J, np.eye(6))
    # the reversal of every arc is among its successors
    assert np.all(B[J.astype(bool)] == 1.0)


def test_semi_edge_factorizations():
    graph = generate('complete_bipartite', p=3, q=4)
    K, L = semi_edge_matrices(graph)
    np.testing.assert_array_equal(K @ L.T, arc_adjacency_matrix(graph))
    np.testing.assert_array_equal(L.T @ K, adjacency_matrix(graph))


def test_format_and_load_round_trip(tmp_path):
    graph = generate('petersen')
    path = tmp_path / 'petersen.txt'
    path.write_text(format_edge_list(graph), encoding='utf-8')
    loaded = load_graph(str(path))
    assert loaded.arcs == graph.arcs
    assert loaded.label == 'petersen'


def test_load_missing_file():
    with pytest.raises(GraphInputError, match="cannot read"):
        load_graph('/nonexistent/graph.txt')


def test_graph_rejects_bad_arc_structure():
    with pytest.raises(GraphInputError):
        Graph(n=2, m=1, arcs=((0, 1), (0, 1)), degrees=(1, 1))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
