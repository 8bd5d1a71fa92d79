import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import PATH3, STAR4, TRIANGLE, random_connected_graph, random_permutation
from polyindex.errors import GraphError, ParseError
from polyindex.graphs import (
    WeightedGraph,
    connected_components,
    degree_profile,
    format_graph,
    laplacian,
    parse_graphs,
    permute,
)


class TestWeightedGraph:
    def test_normalizes_edge_order(self):
        g = WeightedGraph(3, ((3, 1, 2), (2, 1, 1)))
        assert g.edges == ((1, 2, 1), (1, 3, 2))

    def test_rejects_self_loop(self):
        with pytest.raises(GraphError):
            WeightedGraph(3, ((1, 1, 1),))

    def test_rejects_duplicate_edge(self):
        with pytest.raises(GraphError):
            WeightedGraph(3, ((1, 2, 1), (2, 1, 3)))

    def test_rejects_out_of_range_index(self):
        with pytest.raises(GraphError):
            WeightedGraph(3, ((1, 4, 1),))

    def test_rejects_non_positive_weight(self):
        with pytest.raises(GraphError):
            WeightedGraph(3, ((1, 2, 0),))

    def test_rejects_bad_label_count(self):
        with pytest.raises(GraphError):
            WeightedGraph(3, (), ("a", "b"))


class TestLaplacian:
    def test_four_node_star(self):
        lap = laplacian(STAR4)
        assert lap.rows == (
            (3, -1, -1, -1),
            (-1, 1, 0, 0),
            (-1, 0, 1, 0),
            (-1, 0, 0, 1),
        )

    def test_empty_graph_is_zero_matrix(self):
        lap = laplacian(WeightedGraph(4))
        assert lap.rows == tuple((0,) * 4 for _ in range(4))

    def test_single_weighted_edge(self):
        lap = laplacian(WeightedGraph(2, ((1, 2, 5),)))
        assert lap.rows == ((5, -5), (-5, 5))

    def test_row_and_column_sums_are_zero(self):
        rng = random.Random(11)
        for _ in range(25):
            g = random_connected_graph(rng, rng.randint(2, 9), w_max=7)
            lap = laplacian(g)
            n = lap.n
            assert all(sum(lap.rows[i]) == 0 for i in range(n))
            assert all(sum(lap.rows[i][j] for i in range(n)) == 0 for j in range(n))

    def test_permutation_conjugates_laplacian(self):
        rng = random.Random(13)
        for _ in range(25):
            n = rng.randint(2, 8)
            g = random_connected_graph(rng, n, w_max=5)
            perm = random_permutation(rng, n)
            lap = laplacian(g)
            lap_p = laplacian(permute(g, perm))
            for i in range(n):
                for j in range(n):
                    assert lap_p.rows[perm[i] - 1][perm[j] - 1] == lap.rows[i][j]


class TestDegreeProfile:
    def test_triangle(self):
        assert degree_profile(TRIANGLE) == [2, 2, 2]

    def test_star(self):
        assert degree_profile(STAR4) == [3, 1, 1, 1]

    def test_path(self):
        assert degree_profile(PATH3) == [1, 2, 1]

    def test_ignores_weights(self):
        g = WeightedGraph(3, ((1, 2, 9), (2, 3, 4)))
        assert degree_profile(g) == [1, 2, 1]


class TestConnectedComponents:
    def test_two_disjoint_triangles(self):
        g = WeightedGraph.binary(
            6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]
        )
        comps = connected_components(g)
        assert len(comps) == 2
        assert all(c.node_count == 3 and c.edge_count == 3 for c in comps)

    def test_connected_graph_is_single_component(self):
        comps = connected_components(STAR4)
        assert len(comps) == 1
        assert comps[0].node_count == 4
        assert sorted(w for _, _, w in comps[0].edges) == [1, 1, 1]

    def test_empty_graph_splits_into_singletons(self):
        comps = connected_components(WeightedGraph(3))
        assert len(comps) == 3
        assert all(c.node_count == 1 and c.edge_count == 0 for c in comps)

    def test_components_partition_nodes(self):
        rng = random.Random(17)
        for _ in range(20):
            n = rng.randint(1, 10)
            edges = [
                (u, v, 1)
                for u in range(1, n + 1)
                for v in range(u + 1, n + 1)
                if rng.random() < 0.2
            ]
            g = WeightedGraph(n, tuple(edges))
            comps = connected_components(g)
            back = sorted(
                int(label) for c in comps for label in (c.node_labels or ())
            )
            assert back == list(range(1, n + 1))

    def test_back_references_point_at_parent(self):
        g = WeightedGraph.binary(4, [(2, 4)])
        comps = connected_components(g)
        labels = sorted(tuple(c.node_labels) for c in comps)
        assert labels == [("1",), ("2", "4"), ("3",)]


class TestPermute:
    def test_identity(self):
        assert permute(STAR4, (1, 2, 3, 4)) == STAR4

    def test_star_center_swap(self):
        g = permute(STAR4, (2, 1, 3, 4))
        assert g == WeightedGraph.binary(4, [(2, 1), (2, 3), (2, 4)])

    def test_rejects_non_bijection(self):
        with pytest.raises(GraphError):
            permute(STAR4, (1, 1, 3, 4))
        with pytest.raises(GraphError):
            permute(STAR4, (1, 2, 3))

    @given(st.integers(2, 8), st.randoms(use_true_random=False))
    @settings(max_examples=60, deadline=None)
    def test_inverse_law(self, n, rnd):
        rng = random.Random(rnd.randint(0, 10**9))
        g = random_connected_graph(rng, n, w_max=4)
        perm = random_permutation(rng, n)
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p - 1] = i + 1
        assert permute(permute(g, perm), tuple(inv)) == g


class TestTextFormat:
    def test_round_trip(self):
        g = WeightedGraph(4, ((1, 2, 3), (2, 4, 1)))
        text = format_graph(g, "demo")
        (name, parsed), = parse_graphs(text)
        assert name == "demo"
        assert parsed == g

    def test_weight_defaults_to_one(self):
        (_, g), = parse_graphs("graph g 2\n1 2\n")
        assert g.edges == ((1, 2, 1),)

    def test_comments_and_blank_lines(self):
        text = "# header\n\ngraph g 3  # three nodes\n1 2 2\n# done\n"
        (_, g), = parse_graphs(text)
        assert g.edges == ((1, 2, 2),)

    def test_multiple_records(self):
        text = "graph a 2\n1 2\ngraph b 3\n1 3\n2 3\n"
        records = parse_graphs(text)
        assert [name for name, _ in records] == ["a", "b"]
        assert records[1][1].edge_count == 2

    def test_edge_before_header_fails(self):
        with pytest.raises(ParseError):
            parse_graphs("1 2 1\n")

    def test_duplicate_edge_reports_record(self):
        with pytest.raises(ParseError):
            parse_graphs("graph g 3\n1 2\n2 1\n")

    def test_bad_tokens_fail_with_line_number(self):
        with pytest.raises(ParseError) as exc:
            parse_graphs("graph g 2\n1 two\n")
        assert exc.value.line == 2

    def test_empty_stream_fails(self):
        with pytest.raises(ParseError):
            parse_graphs("# nothing here\n")
