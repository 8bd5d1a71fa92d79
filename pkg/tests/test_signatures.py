import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import PAW4, STAR4, random_connected_graph, random_permutation
from polyindex.errors import GraphError, SizeLimitError
from polyindex.graphs import Laplacian, WeightedGraph, laplacian, permute
from polyindex.signatures import (
    CharPolySignature,
    GraphSignature,
    char_signature,
    d2_oracle,
    d2_signature,
    diff,
)

STAR_D2 = (3, 18, 33, 24, 6)
# value for the triangle-with-pendant graph, fixed by the permutation-sum
# definition (and by the coefficient formula; both agree bit for bit)
PAW_D2 = (3, 24, 65, 70, 24)


class TestD2Signature:
    def test_worked_star(self):
        assert d2_signature(laplacian(STAR4)).coeffs == STAR_D2

    def test_worked_paw(self):
        assert d2_signature(laplacian(PAW4)).coeffs == PAW_D2

    def test_empty_graph(self):
        sig = d2_signature(laplacian(WeightedGraph(4)))
        assert sig.coeffs == (3, 0, 0, 0, 0)

    def test_two_node_single_edge(self):
        # d2(xI - L) = x^2 - 2x + 2 for a single unit edge
        sig = d2_signature(laplacian(WeightedGraph.binary(2, [(1, 2)])))
        assert sig.coeffs == (1, 2, 2)

    def test_closed_form_leading_coefficients_binary(self):
        rng = random.Random(23)
        for _ in range(40):
            n = rng.randint(3, 8)
            g = random_connected_graph(rng, n)
            sig = d2_signature(laplacian(g))
            assert sig.coeffs[0] == n - 1
            assert sig.coeffs[1] == 2 * g.edge_count * (n - 1)

    def test_weighted_c1_is_trace_scaled(self):
        rng = random.Random(29)
        for _ in range(30):
            n = rng.randint(3, 7)
            g = random_connected_graph(rng, n, w_max=16)
            lap = laplacian(g)
            sig = d2_signature(lap)
            assert sig.coeffs[1] == (n - 1) * lap.trace

    def test_size_limits(self):
        with pytest.raises(SizeLimitError):
            d2_signature(laplacian(WeightedGraph(13)))
        with pytest.raises(SizeLimitError):
            d2_signature(laplacian(WeightedGraph(1)))
        # but a higher explicit bound admits larger graphs
        rng = random.Random(1)
        g = random_connected_graph(rng, 13)
        d2_signature(laplacian(g), n_max=13)

    def test_recomputation_is_bit_identical(self):
        rng = random.Random(31)
        g = random_connected_graph(rng, 9, w_max=64)
        lap = laplacian(g)
        assert d2_signature(lap) == d2_signature(lap)

    def test_large_weights_stay_exact(self):
        # magnitudes here overflow 64-bit arithmetic; exactness must survive
        rng = random.Random(37)
        g = random_connected_graph(rng, 12, extra_edges=24, w_max=64)
        lap = laplacian(g)
        sig = d2_signature(lap)
        assert sig.coeffs[0] == 11
        assert sig.coeffs[1] == 11 * lap.trace
        assert max(sig.coeffs) > 2**64

    def test_coefficient_vector_shape(self):
        with pytest.raises(GraphError):
            GraphSignature(4, (1, 2, 3))


class TestCharSignature:
    def test_worked_star(self):
        assert char_signature(laplacian(STAR4)).coeffs == (1, -6, 9, -4, 0)

    def test_worked_paw(self):
        assert char_signature(laplacian(PAW4)).coeffs == (1, -8, 19, -12, 0)

    def test_zero_laplacian(self):
        assert char_signature(laplacian(WeightedGraph(3))).coeffs == (1, 0, 0, 0)

    def test_monic_and_singular(self):
        rng = random.Random(41)
        for _ in range(30):
            g = random_connected_graph(rng, rng.randint(2, 9), w_max=9)
            ch = char_signature(laplacian(g))
            assert ch.coeffs[0] == 1
            assert ch.coeffs[-1] == 0

    def test_size_limit(self):
        with pytest.raises(SizeLimitError):
            char_signature(laplacian(WeightedGraph(13)))

    def test_shape_check(self):
        with pytest.raises(GraphError):
            CharPolySignature(3, (1, 2))


class TestDiff:
    def test_equal_signatures(self):
        s = d2_signature(laplacian(STAR4))
        assert diff(s, s) == 0

    def test_worked_pair_arithmetic(self):
        a = GraphSignature(4, (3, 18, 33, 24, 6))
        b = GraphSignature(4, (3, 24, 105, 68, 24))
        assert diff(a, b) == 7480

    @given(
        st.lists(st.integers(-50, 50), min_size=5, max_size=5),
        st.lists(st.integers(-50, 50), min_size=5, max_size=5),
    )
    @settings(max_examples=50)
    def test_symmetry(self, xs, ys):
        a = GraphSignature(4, tuple(xs))
        b = GraphSignature(4, tuple(ys))
        assert diff(a, b) == diff(b, a)
        assert diff(a, b) >= 0

    def test_size_mismatch(self):
        a = GraphSignature(4, (3, 0, 0, 0, 0))
        b = GraphSignature(3, (2, 0, 0, 0))
        with pytest.raises(GraphError):
            diff(a, b)


class TestOracle:
    def test_worked_star(self):
        assert d2_oracle(laplacian(STAR4)).coeffs == STAR_D2

    def test_two_node_edge_agreement(self):
        lap = laplacian(WeightedGraph.binary(2, [(1, 2)]))
        assert d2_oracle(lap) == d2_signature(lap)

    def test_empty_graph(self):
        assert d2_oracle(laplacian(WeightedGraph(4))).coeffs == (3, 0, 0, 0, 0)

    def test_matches_signature_on_random_weighted_graphs(self):
        rng = random.Random(43)
        for _ in range(60):
            n = rng.randint(2, 6)
            g = random_connected_graph(rng, n, w_max=16)
            lap = laplacian(g)
            assert d2_oracle(lap) == d2_signature(lap)

    def test_size_limit(self):
        with pytest.raises(SizeLimitError):
            d2_oracle(laplacian(WeightedGraph(9)))


class TestPermutationInvariance:
    def test_d2_and_char_invariant_under_relabeling(self):
        rng = random.Random(47)
        for _ in range(40):
            n = rng.randint(2, 8)
            w_max = 1 if rng.random() < 0.5 else 16
            g = random_connected_graph(rng, n, w_max=w_max)
            h = permute(g, random_permutation(rng, n))
            assert d2_signature(laplacian(g)) == d2_signature(laplacian(h))
            assert char_signature(laplacian(g)) == char_signature(laplacian(h))

    def test_isomorphic_graphs_share_signature(self):
        # necessary condition: every relabeling of a fixed graph collides
        rng = random.Random(53)
        g = random_connected_graph(rng, 6, extra_edges=4, w_max=3)
        base = d2_signature(laplacian(g))
        import itertools

        for perm in itertools.islice(itertools.permutations(range(1, 7)), 0, 720, 71):
            assert d2_signature(laplacian(permute(g, perm))) == base


def test_laplacian_type_round_trip():
    lap = laplacian(STAR4)
    assert isinstance(lap, Laplacian)
    assert lap.trace == 6
