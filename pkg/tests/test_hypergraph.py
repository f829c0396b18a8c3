"""Tests for edge-list parsing, degrees and the adjacency tensor."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from hypernorm.config import reset_settings
from hypernorm.errors import EdgeListError, InputError, SizeCapError
from hypernorm.hypergraph import (
    UniformHypergraph,
    adjacency_tensor,
    complete_hypergraph,
    degrees,
    empty_hypergraph,
    format_edge_list,
    load_hypergraph,
    parse_edge_list,
    random_hypergraph,
)
from hypernorm.tensor import is_symmetric, slice_sums


class TestParseEdgeList:
    def test_complete_graph(self, k4_3, k4_3_text):
        assert parse_edge_list(k4_3_text) == k4_3

    def test_single_edge(self):
        G = parse_edge_list("n=3 r=2\n1 2\n")
        assert (G.n, G.r, G.edges) == (3, 2, ((1, 2),))

    def test_comments_and_blank_lines(self):
        G = parse_edge_list("# a triangle\n\nn=3 r=2\n1 2\n# middle\n2 3\n\n3 1\n")
        assert G.edges == ((1, 2), (1, 3), (2, 3))

    def test_edges_are_normalized(self):
        assert parse_edge_list("n=4 r=3\n4 2 1\n").edges == ((1, 2, 4),)

    @pytest.mark.parametrize(
        ("text", "line", "message"),
        [
            ("n=3 r=3\n1 1 2\n", 2, "repeated vertex"),
            ("n=3 r=3\n1 2\n", 2, "expected 3"),
            ("n=3 r=2\n1 4\n", 2, "out of range"),
            ("n=3 r=2\n1 2\n# dup\n2 1\n", 4, "duplicate edge"),
            ("n=3 r=2\n1 x\n", 2, "integers"),
            ("1 2\n", 1, "header"),
            ("\n# only a comment\n", 1, "missing header"),
            ("n=0 r=2\n", 1, "n >= 1"),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line, message):
        with pytest.raises(EdgeListError, match=message) as info:
            parse_edge_list(text)
        assert info.value.line == line
        assert str(info.value).startswith(f"line {line}:")

    def test_edge_list_errors_are_input_errors(self):
        with pytest.raises(InputError):
            parse_edge_list("n=2 r=2\n1 1\n")

    def test_load_and_format(self, tmp_path, k4_3, k4_3_text):
        path = tmp_path / "k4.hg"
        path.write_text(format_edge_list(k4_3))
        assert load_hypergraph(path) == k4_3
        assert format_edge_list(k4_3) == k4_3_text


class TestUniformHypergraph:
    def test_validates_edges(self):
        with pytest.raises(ValidationError):
            UniformHypergraph(n=3, r=2, edges=((1, 2), (2, 1)))
        with pytest.raises(ValidationError):
            UniformHypergraph(n=3, r=2, edges=((1, 5),))
        with pytest.raises(ValidationError):
            UniformHypergraph(n=3, r=1)

    def test_generators(self):
        assert len(complete_hypergraph(5, 3).edges) == math.comb(5, 3)
        assert empty_hypergraph(5, 2).edges == ()
        G = random_hypergraph(7, 3, 10, seed=4)
        assert len(G.edges) == 10
        assert G == random_hypergraph(7, 3, 10, seed=4)

    def test_random_rejects_too_many_edges(self):
        with pytest.raises(InputError):
            random_hypergraph(4, 3, 5, seed=0)


class TestDegrees:
    def test_complete(self, k4_3):
        np.testing.assert_array_equal(degrees(k4_3), [3, 3, 3, 3])

    def test_empty(self):
        np.testing.assert_array_equal(degrees(empty_hypergraph(5, 3)), [0, 0, 0, 0, 0])

    def test_hand_count(self):
        G = UniformHypergraph(n=4, r=3, edges=((1, 2, 3), (1, 2, 4)))
        np.testing.assert_array_equal(degrees(G), [2, 2, 1, 1])

    def test_degree_sum(self):
        G = random_hypergraph(8, 4, 12, seed=1)
        assert int(degrees(G).sum()) == 4 * 12


class TestAdjacencyTensor:
    def test_single_2_edge(self):
        A = adjacency_tensor(UniformHypergraph(n=2, r=2, edges=((1, 2),)))
        np.testing.assert_array_equal(A.array, [[0.0, 1.0], [1.0, 0.0]])
        assert A.nonnegative

    def test_single_3_edge(self):
        A = adjacency_tensor(UniformHypergraph(n=3, r=3, edges=((1, 2, 3),)))
        assert int(A.entries.sum()) == 6

    def test_slice_sums_are_scaled_degrees(self, k4_3):
        np.testing.assert_array_equal(slice_sums(adjacency_tensor(k4_3)), [6.0, 6.0, 6.0, 6.0])
        for seed in range(5):
            G = random_hypergraph(6, 3, 9, seed)
            A = adjacency_tensor(G)
            assert is_symmetric(A)
            assert int(A.entries.sum()) == math.factorial(3) * len(G.edges)
            np.testing.assert_array_equal(slice_sums(A), math.factorial(2) * degrees(G))

    def test_pipeline_is_deterministic(self, k4_3_text):
        first = slice_sums(adjacency_tensor(parse_edge_list(k4_3_text)))
        second = slice_sums(adjacency_tensor(parse_edge_list(k4_3_text)))
        np.testing.assert_array_equal(first, second)

    def test_dense_cap(self, monkeypatch):
        monkeypatch.setenv("HYPERNORM_DENSE_CAP", "100")
        reset_settings()
        with pytest.raises(SizeCapError):
            adjacency_tensor(complete_hypergraph(5, 3))
        with pytest.raises(SizeCapError):
            adjacency_tensor(complete_hypergraph(3, 3), cap=10)
