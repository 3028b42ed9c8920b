from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

import matching_check
from besg import fixtures as F
from besg.dpo import RuleSpan, rewrite, rewrite_first, validate_rule
from besg.graph import GraphError, graph_isomorphic, is_string_graph, wire_homeomorphic
from besg.matching import check_matching, find_embeddings, find_matchings


def test_composite_rule_matches_target_in_every_sliding_class():
    ms = find_matchings(F.composite_rule().lhs, F.composite_target())
    # the pattern's input and output may or may not sit next to the target's
    assert len(ms) == 4
    for m in ms:
        assert m.map["f"] == "f" and m.map["g"] == "g"
        assert check_matching(F.composite_rule().lhs, m.expanded_target, m.map,
                              F.composite_rule().boundary) is None


def test_rewriting_composite_gives_fused_box():
    r = F.composite_rule()
    for m in find_matchings(r.lhs, F.composite_target()):
        assert wire_homeomorphic(rewrite(F.composite_target(), r, m), F.composite_result())


def test_no_dangling_edges_at_interior_nodes():
    # a node with one wire cannot match a node that has two
    assert find_matchings(F.complete_graph(2), F.complete_graph(3)) == []


def test_pattern_with_missing_label_has_no_matches():
    assert find_matchings(F.graph("k:k i:w", "i>k"), F.diagram()) == []


def test_matching_into_longer_wires():
    l = F.graph("a:white u:w b:white", "a>u u>b")
    h = F.graph("a:white u1:w u2:w u3:w b:white", "a>u1 u1>u2 u2>u3 u3>b")
    (m,) = find_matchings(l, h)
    assert m.map["a"] == "a" and m.map["b"] == "b"


def test_matching_needs_shorter_target_wires_to_be_contracted():
    l = F.graph("i:w a:white", "i>a")
    h = F.graph("x:w y:w z:w a:white", "x>y y>z z>a")
    ms = find_matchings(l, h)
    # i at the very start of the wire, or with a gap before it
    assert len(ms) == 2


def test_circle_matches_up_to_rotation():
    l = F.graph("c1:w c2:w", "c1>c2 c2>c1")
    h = F.graph("d1:w d2:w d3:w", "d1>d2 d2>d3 d3>d1")
    assert len(find_matchings(l, h)) == 1


def test_find_embeddings_is_exact():
    l = F.graph("a:white u:w b:white", "a>u u>b")
    h = F.graph("a:white u1:w u2:w b:white", "a>u1 u1>u2 u2>b")
    assert find_embeddings(l, h, ("a", "b")) == []
    assert len(find_embeddings(l, F.complete_graph(3), ("a", "b"))) == 3


def test_validate_rule_reports_problems():
    assert validate_rule(F.composite_rule())
    bad = RuleSpan(F.graph("i:w f:f o:w", "i>f f>o"), F.graph("i:w k:k", "i>k"))
    assert "boundary" in validate_rule(bad).conditions()
    flipped = RuleSpan(F.graph("i:w f:f o:w", "i>f f>o"), F.graph("i:w k:k o:w", "o>k k>i"))
    assert "io" in validate_rule(flipped).conditions()
    shared = RuleSpan(F.graph("i:w f:f", "i>f"), F.graph("i:w f:f", "i>f"))
    assert "boundary" in validate_rule(shared).conditions()


def test_rewrite_rejects_invalid_rules():
    bad = RuleSpan(F.graph("i:w f:f o:w", "i>f f>o"), F.graph("i:w k:k", "i>k"))
    target = F.graph("a:w f:f b:w", "a>f f>b")
    m = find_matchings(bad.lhs, target)[0]
    with pytest.raises(GraphError):
        rewrite(target, bad, m)


def test_rewrite_first_without_match():
    assert rewrite_first(F.diagram(), F.erase_grey()) is None


def test_reversed_rule_undoes_rewrite():
    r = F.composite_rule()
    h = rewrite_first(F.composite_target(), r)
    back = rewrite_first(h, r.reversed())
    assert wire_homeomorphic(back, F.composite_target())


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=1000, max_value=10**6))
def test_matching_agrees_with_brute_force(seed):
    ok, _ = matching_check.agrees_with_brute_force(seed)
    assert ok


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_every_matching_passes_the_incidence_check_and_rewrites(seed):
    l, h = matching_check.random_pair(seed)
    for m in find_matchings(l, h):
        assert check_matching(l, m.expanded_target, m.map, m.pattern_boundary) is None
        assert wire_homeomorphic(m.expanded_target, h)
        # identity rewrite: the boundary maps to itself, interior gets renamed copies
        rhs = l.rename({v: f"{v}'" for v in l.vertices if v not in m.pattern_boundary})
        r = RuleSpan(l, rhs, "id")
        if validate_rule(r):
            out = rewrite(h, r, m)
            assert is_string_graph(out)
            assert graph_isomorphic(out, m.expanded_target) is not None
