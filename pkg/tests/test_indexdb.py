import random

import pytest

from helpers import PAW4, random_connected_graph, random_permutation
from polyindex.decompose import p_neighborhood_subgraphs
from polyindex.errors import DatabaseFormatError, GraphError
from polyindex.graphs import WeightedGraph, laplacian, permute
from polyindex.indexdb import (
    DbParams,
    ModelDatabase,
    build_database,
    load_database,
    lookup,
    recognize,
    save_database,
)
from polyindex.signatures import GraphSignature, d2_signature

# two small "subview" graphs: a 5-cycle and a 6-cycle, each with one
# weighted chord so the weighted signatures are distinctive
G_A = WeightedGraph(
    5,
    ((1, 2, 1), (2, 3, 2), (3, 4, 1), (4, 5, 3), (1, 5, 1), (2, 5, 2)),
)
G_B = WeightedGraph(
    6,
    ((1, 2, 2), (2, 3, 1), (3, 4, 1), (4, 5, 2), (5, 6, 1), (1, 6, 1), (3, 6, 3)),
)


def union_graph(*parts: WeightedGraph) -> WeightedGraph:
    n = sum(p.node_count for p in parts)
    edges = []
    offset = 0
    for p in parts:
        edges.extend((u + offset, v + offset, w) for u, v, w in p.edges)
        offset += p.node_count
    return WeightedGraph(n, tuple(edges))


SCHEMATIC_PARAMS = DbParams(p=5, min_nodes=5, max_nodes=10)


def schematic_database():
    """Two objects, three views: view CV11 contains subview A only, while
    CV12 and CV21 each contain subviews A and B."""
    views = [
        ("obj1", "CV11", G_A),
        ("obj1", "CV12", union_graph(G_A, G_B)),
        ("obj2", "CV21", union_graph(G_B, G_A)),
    ]
    return build_database(views, SCHEMATIC_PARAMS)


def sig_of(g: WeightedGraph) -> GraphSignature:
    return d2_signature(laplacian(g))


class TestBuild:
    def test_schematic_three_layer_structure(self):
        db, report = schematic_database()
        assert report.object_count == 2
        assert report.view_count == 3
        assert report.entry_count == 2  # subviews A and B, shared
        assert report.accidents == ()
        entry_a = lookup(db, sig_of(G_A))
        entry_b = lookup(db, sig_of(G_B))
        assert entry_a.cv_ids == ("CV11", "CV12", "CV21")
        assert entry_b.cv_ids == ("CV12", "CV21")
        assert db.objects["obj1"].cv_ids == ("CV11", "CV12")
        assert db.objects["obj2"].cv_ids == ("CV21",)
        assert report.sharing_ratio == pytest.approx(5 / 2)

    def test_single_view_entry_bound(self):
        rng = random.Random(5)
        g = random_connected_graph(rng, 8, extra_edges=6, w_max=4)
        db, report = build_database(
            [("o", "v", g)], DbParams(p=2, min_nodes=5, max_nodes=10)
        )
        members = p_neighborhood_subgraphs(g, 2, 5, 10).members
        assert 1 <= report.entry_count <= len(members)
        assert report.view_count == 1

    def test_shared_subview_lists_both_views(self):
        g = union_graph(G_A, G_B)
        db, _ = build_database(
            [("o1", "v1", g), ("o2", "v2", g)], SCHEMATIC_PARAMS
        )
        for sub in (G_A, G_B):
            assert lookup(db, sig_of(sub)).cv_ids == ("v1", "v2")

    def test_duplicate_view_id_rejected(self):
        with pytest.raises(GraphError):
            build_database(
                [("o", "v", G_A), ("o", "v", G_B)], SCHEMATIC_PARAMS
            )

    def test_irrelevant_views_skipped_and_empty_build_fails(self):
        tree = WeightedGraph.binary(5, [(1, 2), (2, 3), (3, 4), (4, 5)])
        db, report = build_database(
            [("o", "t", tree), ("o", "a", G_A)], SCHEMATIC_PARAMS
        )
        assert report.view_count == 1
        assert any("relevance" in s for s in report.skipped)
        with pytest.raises(GraphError):
            build_database([("o", "t", tree)], SCHEMATIC_PARAMS)

    def test_params_validation(self):
        with pytest.raises(GraphError):
            DbParams(p=0)
        with pytest.raises(GraphError):
            DbParams(min_nodes=1)
        with pytest.raises(GraphError):
            DbParams(min_nodes=6, max_nodes=5)
        with pytest.raises(GraphError):
            DbParams(max_nodes=13, n_max=12)
        with pytest.raises(GraphError):
            DbParams(mode="other")


class TestLookup:
    def test_stored_signature_found(self):
        db, _ = schematic_database()
        entry = lookup(db, sig_of(G_A))
        assert entry is not None
        assert entry.signature == sig_of(G_A)

    def test_isomorphic_graph_maps_to_same_entry(self):
        db, _ = schematic_database()
        rng = random.Random(7)
        relabeled = permute(G_A, random_permutation(rng, 5))
        assert lookup(db, sig_of(relabeled)) is lookup(db, sig_of(G_A))

    def test_absent_signature(self):
        db, _ = build_database(
            [("o", "v", PAW4)], DbParams(p=2, min_nodes=4, max_nodes=10)
        )
        star_sig = GraphSignature(4, (3, 18, 33, 24, 6))
        assert lookup(db, star_sig) is None


class TestRecognize:
    def test_schematic_voting_walkthrough(self):
        db, _ = schematic_database()
        rng = random.Random(11)
        scene = [
            permute(G_A, random_permutation(rng, 5)),
            permute(G_B, random_permutation(rng, 6)),
        ]
        result = recognize(db, scene)
        assert result.combined.votes == {"CV12": 2, "CV21": 2, "CV11": 1}
        assert result.per_graph[0].votes == {"CV11": 1, "CV12": 1, "CV21": 1}
        assert result.per_graph[1].votes == {"CV12": 1, "CV21": 1}
        ranked = result.ranked()
        assert {ranked[0][0], ranked[1][0]} == {"CV12", "CV21"}
        assert ranked[0][1] == ranked[1][1] == 2

    def test_exact_copy_attains_full_vote_count(self):
        rng = random.Random(13)
        g = random_connected_graph(rng, 9, extra_edges=7, w_max=4)
        params = DbParams(p=2, min_nodes=5, max_nodes=10)
        db, _ = build_database([("o", "v", g)], params)
        view = db.views["v"]
        result = recognize(db, [g])
        assert result.combined.votes["v"] == len(view.subgraph_refs) > 0

    def test_tallies_invariant_under_scene_relabeling(self):
        db, _ = schematic_database()
        rng = random.Random(17)
        g = union_graph(G_A, G_B)
        h = permute(g, random_permutation(rng, g.node_count))
        assert recognize(db, [g]).combined.votes == recognize(db, [h]).combined.votes

    def test_empty_scene(self):
        db, _ = schematic_database()
        result = recognize(db, [])
        assert result.combined.votes == {}
        assert result.per_graph == ()

    def test_brute_force_recount(self):
        rng = random.Random(19)
        params = DbParams(p=2, min_nodes=4, max_nodes=9)
        views = [
            (f"o{i % 3}", f"v{i}", random_connected_graph(rng, rng.randint(6, 10), w_max=3))
            for i in range(6)
        ]
        views = [v for v in views if v[2].edge_count >= v[2].node_count]
        db, _ = build_database(views, params)
        query = random_connected_graph(rng, 9, extra_edges=6, w_max=3)
        result = recognize(db, [query])
        expected: dict[str, int] = {}
        for member in p_neighborhood_subgraphs(query, 2, 4, 9).members:
            entry = lookup(db, sig_of(member.graph))
            if entry:
                for cv in entry.cv_ids:
                    expected[cv] = expected.get(cv, 0) + 1
        assert result.combined.votes == expected

    def test_growing_database_never_steals_votes(self):
        rng = random.Random(23)
        params = DbParams(p=2, min_nodes=4, max_nodes=9)
        base_views = [
            ("o1", "v1", random_connected_graph(rng, 8, extra_edges=5, w_max=3)),
            ("o1", "v2", random_connected_graph(rng, 9, extra_edges=6, w_max=3)),
        ]
        extra_views = [
            ("o2", "w1", random_connected_graph(rng, 8, extra_edges=5, w_max=3)),
            ("o3", "w2", random_connected_graph(rng, 10, extra_edges=7, w_max=3)),
        ]
        db_small, _ = build_database(base_views, params)
        db_big, _ = build_database(base_views + extra_views, params)
        query = permute(base_views[0][2], random_permutation(rng, 8))
        small = recognize(db_small, [query]).combined.votes
        big = recognize(db_big, [query]).combined.votes
        for cv, count in small.items():
            assert big.get(cv, 0) >= count


class TestSerialization:
    def test_round_trip_schematic(self):
        db, _ = schematic_database()
        assert load_database(save_database(db)) == db

    def test_round_trip_random_databases(self):
        rng = random.Random(29)
        params = DbParams(p=2, min_nodes=4, max_nodes=9)
        for trial in range(5):
            views = []
            for i in range(rng.randint(1, 5)):
                g = random_connected_graph(rng, rng.randint(6, 10), w_max=5)
                if g.edge_count >= g.node_count:
                    views.append((f"o{i % 2}", f"v{trial}_{i}", g))
            if not views:
                continue
            db, _ = build_database(views, params)
            text = save_database(db)
            assert load_database(text) == db
            assert save_database(load_database(text)) == text

    def test_labels_survive_round_trip(self):
        g = WeightedGraph(
            5,
            ((1, 2, 1), (2, 3, 2), (3, 4, 1), (4, 5, 3), (1, 5, 1)),
            ("p", "q", "r", "s", "t"),
        )
        db, _ = build_database(
            [("o", "v", g)], DbParams(p=3, min_nodes=5, max_nodes=10)
        )
        loaded = load_database(save_database(db))
        assert loaded.views["v"].view_graph.node_labels == ("p", "q", "r", "s", "t")

    def test_empty_database_round_trip(self):
        empty = ModelDatabase(DbParams(), {}, {}, {})
        assert load_database(save_database(empty)) == empty

    def test_truncated_stream_rejected(self):
        db, _ = schematic_database()
        text = save_database(db)
        truncated = text[: len(text) // 2]
        with pytest.raises(DatabaseFormatError):
            load_database(truncated)

    def test_unknown_version_rejected(self):
        db, _ = schematic_database()
        text = save_database(db).replace("polyindex-db 1", "polyindex-db 99", 1)
        with pytest.raises(DatabaseFormatError):
            load_database(text)

    def test_garbage_rejected(self):
        with pytest.raises(DatabaseFormatError):
            load_database("not a database\nend\n")
        with pytest.raises(DatabaseFormatError):
            load_database("")

    def test_cross_layer_integrity_enforced(self):
        db, _ = schematic_database()
        text = save_database(db)
        broken = text.replace("object obj2 CV21", "object obj2 CVxx")
        with pytest.raises(DatabaseFormatError):
            load_database(broken)
