import pytest
from hypothesis import given

from boundedgames.formula import ParseError
from boundedgames.hypergraph import Hypergraph, emit_hypergraph, parse_hypergraph

from conftest import hypergraphs


def test_parse_example():
    h = parse_hypergraph("p pos 3 2\n1 2 0\n2 3 0")
    assert h.num_vertices == 3 and h.edges == ((1, 2), (2, 3))
    assert h.rank == 2 and h.max_degree == 2 and h.degrees() == {1: 1, 2: 2, 3: 1}


@pytest.mark.parametrize("text, msg", [
    ("p pos 2 1\n1 1 0", "duplicate"),
    ("p pos 2 1\n1 3 0", "out of range"),
    ("p pos 2 2\n1 2 0", "declares 2"),
    ("1 2 0", "header"),
    ("p pos 2 1\n1 2", "single 0"),
    ("p pos 2 1\nc label 5 five\n1 2 0", "label"),
])
def test_parse_errors(text, msg):
    with pytest.raises(ParseError, match=msg):
        parse_hypergraph(text)


def test_labels_and_empty_edge():
    h = Hypergraph.build([[2, 1], []], 3, {1: "a", 3: "c"})
    assert h.edges == ((1, 2), ())
    assert h.label(1) == "a" and h.label(2) == "2"
    assert h.isolated() == [3]
    assert parse_hypergraph(emit_hypergraph(h)) == h


def test_edges_are_a_multiset():
    h = Hypergraph.build([[1, 2], [2, 1]])
    assert len(h.edges) == 2 and h.degrees()[1] == 2


@given(hypergraphs(max_vertices=8, max_edges=6, allow_empty=True))
def test_round_trip(h):
    assert parse_hypergraph(emit_hypergraph(h)) == h


@given(hypergraphs(max_vertices=8, max_edges=6))
def test_degree_sum(h):
    assert sum(h.degrees().values()) == sum(len(e) for e in h.edges)
