"""String graph rewrite rules and double-pushout rewriting.

A rule is a pair of string graphs whose common boundary is given by shared
vertex names: a vertex named ``i`` in both ``lhs`` and ``rhs`` is the same
boundary point of the span ``lhs <- B -> rhs``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import (Graph, GraphError, Report, Violation, _boundary, check_string_graph,
                    wire_homeomorphic)
from .matching import Matching, check_matching, find_matchings


@dataclass(frozen=True)
class RuleSpan:
    lhs: Graph
    rhs: Graph
    name: str = "rule"

    @property
    def boundary(self) -> frozenset[str]:
        return frozenset(self.lhs.vertices) & frozenset(self.rhs.vertices)

    def reversed(self) -> RuleSpan:
        return RuleSpan(self.rhs, self.lhs, f"{self.name}^-1")


def validate_rule(r: RuleSpan) -> Report:
    out: list[Violation] = []
    for side, g in (("lhs", r.lhs), ("rhs", r.rhs)):
        rep = check_string_graph(g)
        if not rep:
            out.append(Violation("string-graph", f"{side} is not a string graph: {rep.first}"))
    if out:
        return Report(tuple(out))
    shared = r.boundary
    l_in, l_out = _boundary(r.lhs)
    r_in, r_out = _boundary(r.rhs)
    for v in sorted(shared):
        if r.lhs.vertices[v] != r.rhs.vertices[v]:
            out.append(Violation("label", f"boundary vertex {v!r} is labelled differently "
                                          "on the two sides", (v,)))
    for side, ins, outs in (("lhs", l_in, l_out), ("rhs", r_in, r_out)):
        for v in sorted(shared - (ins | outs)):
            out.append(Violation("boundary", f"shared vertex {v!r} is not on the boundary "
                                             f"of the {side}", (v,)))
        for v in sorted((ins | outs) - shared):
            out.append(Violation("boundary", f"boundary vertex {v!r} of the {side} is "
                                             "missing from the other side", (v,)))
    for v in sorted(shared & ((l_in ^ r_in) | (l_out ^ r_out))):
        out.append(Violation("io", f"{v!r} is an input/output on one side only", (v,)))
    return Report(tuple(out))


def rewrite(g: Graph, r: RuleSpan, m: Matching, counter: int = 0,
            check_target: bool = True) -> Graph:
    """Pushout complement followed by pushout, on ``m.expanded_target``.

    Fresh vertices copied from the rhs are named ``<rule>.<rhs-vertex>.<counter>``.
    """
    rep = validate_rule(r)
    if not rep:
        raise GraphError(f"invalid rule {r.name!r}: {rep.first}")
    work = m.expanded_target
    bnd = r.boundary
    problem = check_matching(r.lhs, work, m.map, bnd)
    if problem is not None:
        raise GraphError(f"not a matching of {r.name!r}: {problem}")
    if check_target and work != g and not wire_homeomorphic(work, g):
        raise GraphError("the matching's target is not wire-homeomorphic to the graph")

    # pushout complement: drop the interior of the match and every lhs edge
    lhs_edges = {(m.map[s], lab, m.map[t]) for s, lab, t in r.lhs.edges}
    interior = [m.map[v] for v in r.lhs.vertices if v not in bnd]
    context = work.without(interior)
    context = context.replace(edges=context.edges - lhs_edges)

    # pushout: glue in a fresh copy of the rhs along the boundary
    names: dict[str, str] = {v: m.map[v] for v in bnd}
    taken: set[str] = set()
    for v in r.rhs.vertices:
        if v not in bnd:
            names[v] = context.fresh_name(f"{r.name}.{v}.{counter}", taken)
            taken.add(names[v])
    verts = dict(context.vertices)
    verts.update({names[v]: lab for v, lab in r.rhs.vertices.items() if v not in bnd})
    edges = set(context.edges)
    edges.update((names[s], lab, names[t]) for s, lab, t in r.rhs.edges)
    result = Graph(context.alphabets.union(r.rhs.alphabets), verts, frozenset(edges))
    rep = check_string_graph(result)
    if not rep:
        raise GraphError(f"rewrite produced a non-string graph: {rep.first}")
    return result


def rewrite_first(g: Graph, r: RuleSpan, index: int = 0) -> Optional[Graph]:
    """Rewrite at the ``index``-th matching class of ``r.lhs``, if there is one."""
    ms = find_matchings(r.lhs, g)
    if index >= len(ms):
        return None
    return rewrite(g, r, ms[index], check_target=False)
