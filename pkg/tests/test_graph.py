from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from besg import fixtures as F
from besg.graph import (Alphabets, Graph, GraphError, IsoIndex, WireKind, boundary,
                        check_string_graph, graph_isomorphic, is_minimal, is_string_graph,
                        merge_wire_vertices, minimal_representative, split_wire_vertex,
                        stretch_wire, wire_homeomorphic, wires)

seeds = st.integers(min_value=0, max_value=10**6)


def random_graph(seed: int, size: int = 12) -> Graph:
    return oracles.random_string_graph(random.Random(seed), F.ALPHABETS, size)


# -- construction and validation -----------------------------------------------


def test_alphabets_must_be_disjoint():
    with pytest.raises(GraphError):
        Alphabets({"a"}, {"a"})
    with pytest.raises(GraphError):
        Alphabets({"a"}, {"w"}, edge_labels={"e"}, encoding_labels={"x"})


def test_graph_rejects_self_loops_and_unknown_labels():
    with pytest.raises(GraphError):
        F.graph("a:w", "a>a")
    with pytest.raises(GraphError):
        F.graph("a:nope")
    with pytest.raises(GraphError):
        F.graph("a:w b:w", "a>nope>b")
    with pytest.raises(GraphError):
        F.graph("a:w", "a>b")


def test_diagram_is_a_string_graph_with_one_input_and_one_output():
    g = F.diagram()
    assert is_string_graph(g)
    ins, outs = boundary(g)
    assert ins == {"in"} and outs == {"out"}


def test_node_to_node_edge_reports_condition_1():
    g = F.graph("a:white b:white", "a>b")
    assert is_string_graph(g).first.condition == "1"


def test_degree_violations_are_conditions_2_and_3():
    g = F.graph("a:white b:white w:w", "a>w b>w")
    assert check_string_graph(g).first.condition == "2"
    g = F.graph("a:white b:white w:w", "w>a w>b")
    assert check_string_graph(g).first.condition == "3"


def test_encoding_edges_only_between_nodes_when_allowed():
    g = F.graph("a:white b:white", "a>alpha>b")
    assert not check_string_graph(g)
    assert check_string_graph(g, allow_encoding=True)
    g = F.graph("a:white w:w", "a>alpha>w")
    assert check_string_graph(g, allow_encoding=True).first.condition == "encoding"


def test_nonterminals_are_not_string_graphs():
    assert check_string_graph(F.graph("x:X")).first.condition == "terminal"


def test_graphs_are_values():
    assert F.diagram() == F.diagram()
    assert hash(F.diagram()) == hash(F.diagram())
    assert F.diagram() != F.composite_target()


# -- wires ---------------------------------------------------------------------


def test_wire_kinds():
    g = F.graph("a:white i:w o:w p:w q:w c1:w c2:w z:w",
                "i>a a>o p>q c1>c2 c2>c1")
    kinds = {w.path: w.kind for w in wires(g)}
    assert kinds == {("i",): WireKind.ATTACHED, ("o",): WireKind.ATTACHED,
                     ("p", "q"): WireKind.BARE, ("c1", "c2"): WireKind.CIRCLE}


def test_merge_and_split_are_inverse_up_to_names():
    a, b = F.merge_pair()
    assert graph_isomorphic(merge_wire_vertices(a, "u", "v"), b) is not None
    assert graph_isomorphic(split_wire_vertex(b, "u"), a) is not None


def test_merge_preconditions():
    a, _ = F.merge_pair()
    with pytest.raises(GraphError):
        merge_wire_vertices(a, "v", "u")
    circle = F.graph("c1:w c2:w", "c1>c2 c2>c1")
    with pytest.raises(GraphError):
        merge_wire_vertices(circle, "c1", "c2")
    bare = F.graph("p:w q:w", "p>q")
    with pytest.raises(GraphError):
        merge_wire_vertices(bare, "p", "q")


def test_minimal_representative_floors():
    g = F.graph("a:white w1:w w2:w w3:w p1:w p2:w p3:w c1:w c2:w c3:w",
                "a>w1 w1>w2 w2>w3 p1>p2 p2>p3 c1>c2 c2>c3 c3>c1")
    h = minimal_representative(g)
    lengths = sorted((w.kind.value, len(w)) for w in wires(h))
    assert lengths == [("Attached", 1), ("Bare", 2), ("Circle", 2)]


def test_minimal_representative_keeps_boundary_names():
    g = F.graph("a:white w1:w w2:w o:w i:w j:w b:white", "a>w1 w1>w2 w2>o i>j j>b")
    h = minimal_representative(g)
    assert boundary(h) == boundary(g)


def test_stretch_keeps_boundary_names():
    g = F.graph("a:white o:w", "a>o")
    (w,) = wires(g)
    h, path = stretch_wire(g, w, 4)
    assert len(path) == 4 and path[-1] == "o"
    assert boundary(h) == boundary(g)


def test_wire_homeomorphism_of_the_merge_pair():
    a, b = F.merge_pair()
    assert wire_homeomorphic(a, b)
    assert not wire_homeomorphic(a, F.graph("a:white u:w b:black", "a>u u>b"))


def test_iso_index_deduplicates():
    idx = IsoIndex()
    assert idx.add(F.complete_graph(3))
    assert not idx.add(F.complete_graph(3).rename({"n0": "zz"}))
    assert idx.add(F.complete_graph(4))
    assert len(idx) == 2


# -- properties ----------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_minimal_representative_matches_greedy_merging(seed):
    g = random_graph(seed)
    assert oracles.isomorphic(minimal_representative(g), oracles.greedy_normalize(g))


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(min_value=0, max_value=6))
def test_homeomorphism_survives_random_splits(seed, steps):
    g = random_graph(seed)
    h = oracles.random_resplit(g, random.Random(seed + 1), steps)
    assert wire_homeomorphic(g, h)
    assert graph_isomorphic(minimal_representative(g), minimal_representative(h)) is not None


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_minimal_representative_is_idempotent_and_minimal(seed):
    h = minimal_representative(random_graph(seed))
    assert is_minimal(h)
    assert is_string_graph(h)


@settings(max_examples=60, deadline=None)
@given(seeds, seeds)
def test_isomorphism_agrees_with_networkx(a, b):
    g, h = random_graph(a, 8), random_graph(b, 8)
    assert (graph_isomorphic(g, h) is not None) == oracles.isomorphic(g, h)
    perm = {v: f"r{v}" for v in g.vertices}
    m = graph_isomorphic(g, g.rename(perm))
    assert m is not None
    assert {(m[s], lab, m[t]) for s, lab, t in g.edges} == g.rename(perm).edges
