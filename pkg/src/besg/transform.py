"""Rewriting grammars: apply a string graph rule inside production bodies.

Only the final part of a body may be rewritten: vertices that are not
non-terminals, not next to one, not targets of connection instructions and
not on encoding edges.  Such vertices look the same in every derived graph,
so rewriting them in the body is the same as rewriting every copy later.

To match into a final part we cut it out of the body and stand in a stub
vertex for each edge leaving it (a node-vertex stub where the final end is a
wire-vertex, a wire-vertex stub where it is a node-vertex).  That makes it an
ordinary string graph, so the usual matching and rewriting apply; afterwards
the stubs are replaced by the real neighbours again.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .besg import (BESG, concrete_derive, decoded_size_lower_bound, validate_besg)
from .decision import is_match_exhaustive
from .dpo import RuleSpan, rewrite, validate_rule
from .grammar import DerivationTrace, GrammarError, Production, completing_traces
from .graph import (Alphabets, Edge, Graph, GraphError, IsoIndex, wire_homeomorphic)
from .matching import Matching, find_matchings
from .pattern import PatternError, RewritePattern, instantiate, validate_pattern

STUB_NODE = "__stub_node__"
STUB_WIRE = "__stub_wire__"
_STUBS = Alphabets({STUB_NODE}, {STUB_WIRE})


@dataclass(frozen=True)
class FinalSubgraph:
    production: str
    vertices: frozenset[str]


def final_subgraph(p: Production) -> FinalSubgraph:
    body = p.body
    excluded = set(body.nonterminals)
    for y in body.nonterminals:
        excluded |= body.neighbours(y)
    excluded |= {c.target for c in p.connections}
    for e in body.edges:
        if body.is_encoding(e):
            excluded |= {e[0], e[2]}
    return FinalSubgraph(p.name, frozenset(v for v in body.vertices if v not in excluded))


@dataclass(frozen=True)
class _View:
    graph: Graph
    stubs: dict[str, tuple[str, str, bool]]    # stub -> (outside vertex, label, outgoing)


def _final_view(p: Production) -> _View:
    body = p.body
    keep = final_subgraph(p).vertices
    verts = {v: body.vertices[v] for v in keep}
    edges: set[Edge] = {e for e in body.edges if e[0] in keep and e[2] in keep}
    stubs: dict[str, tuple[str, str, bool]] = {}
    for i, (s, lab, t) in enumerate(body.sorted_edges):
        if (s in keep) == (t in keep):
            continue
        inside, outside, outgoing = (s, t, True) if s in keep else (t, s, False)
        name = f"__stub{i}__"
        verts[name] = STUB_WIRE if body.is_node(inside) else STUB_NODE
        stubs[name] = (outside, lab, outgoing)
        edges.add((inside, lab, name) if outgoing else (name, lab, inside))
    alph = body.alphabets.union(_STUBS)
    return _View(Graph(alph, verts, frozenset(edges)), stubs)


def _reassemble(p: Production, view: _View, new: Graph) -> Graph:
    body = p.body
    keep = final_subgraph(p).vertices
    verts = {v: lab for v, lab in body.vertices.items() if v not in keep}
    edges = {e for e in body.edges if e[0] not in keep and e[2] not in keep}
    for v, lab in new.vertices.items():
        if v in view.stubs:
            continue
        if v in verts:
            raise GraphError(f"rewritten body reuses the name {v!r}")
        verts[v] = lab
    for s, lab, t in new.edges:
        if s in view.stubs:
            edges.add((view.stubs[s][0], lab, t))
        elif t in view.stubs:
            edges.add((s, lab, view.stubs[t][0]))
        else:
            edges.add((s, lab, t))
    return Graph(body.alphabets, verts, frozenset(edges))


@dataclass(frozen=True)
class TransformResult:
    b_prime: BESG
    production: str
    matching: Matching


def transform_step(b: BESG, sr: RuleSpan) -> list[TransformResult]:
    """Every grammar obtained by rewriting one final subgraph with ``sr``."""
    rep = validate_rule(sr)
    if not rep:
        raise GraphError(f"invalid rule {sr.name!r}: {rep.first}")
    out: list[TransformResult] = []
    for name, p in b.grammar.productions.items():
        view = _final_view(p)
        if not view.graph.vertices:
            continue
        for m in find_matchings(sr.lhs, view.graph):
            new_view = rewrite(view.graph, sr, m, check_target=False)
            body = _reassemble(p, view, new_view)
            q = Production(name, p.head, body, p.connections)
            b2 = BESG(b.grammar.replace_production(q), b.decoder)
            rep = validate_besg(b2)
            assert rep, f"transformation broke the grammar: {rep.first}"
            out.append(TransformResult(b2, name, m))
    return out


def induced_pattern(b: BESG, b_prime: BESG) -> RewritePattern:
    p = RewritePattern(b, b_prime)
    rep = validate_pattern(p)
    if not rep:
        raise PatternError(f"induced pattern is invalid: {rep}")
    return p


def modified_productions(b: BESG, b_prime: BESG) -> list[str]:
    g1, g2 = b.grammar.productions, b_prime.grammar.productions
    return sorted(n for n in g1 if n in g2 and g1[n] != g2[n])


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    n: int
    chain: tuple[Graph, ...] = ()
    matchings: tuple[Matching, ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.admissible


def check_admissibility(b: BESG, b_prime: BESG, sr: RuleSpan, t: DerivationTrace,
                        production: Optional[str] = None,
                        budget: int = 100_000) -> Admissibility:
    """Search for exactly n rewrites with ``sr`` from F to a graph ~ F'.

    F and F' are the graphs ``t`` derives in ``b`` and ``b_prime``; n is how
    often ``t`` uses the modified production.  ``chain`` holds the graphs
    after each rewrite (possibly partial when the budget runs out).
    """
    induced_pattern(b, b_prime)
    if production is None:
        changed = modified_productions(b, b_prime)
        if len(changed) > 1:
            raise GrammarError(f"more than one production differs: {changed}")
        production = changed[0] if changed else ""
    n = t.count(production) if production else 0
    f = concrete_derive(b, t)
    f_prime = concrete_derive(b_prime, t)
    visited = [IsoIndex() for _ in range(n + 1)]
    calls = 0
    best: list[Graph] = []
    best_m: list[Matching] = []

    def search(g: Graph, k: int, chain: list[Graph], ms: list[Matching]) -> bool:
        nonlocal calls, best, best_m
        calls += 1
        if calls > budget:
            raise _Budget
        if len(chain) > len(best):
            best, best_m = list(chain), list(ms)
        if k == n:
            return wire_homeomorphic(g, f_prime)
        if not visited[k].add(g):
            return False
        for m in find_matchings(sr.lhs, g):
            g2 = rewrite(g, sr, m, counter=k, check_target=False)
            chain.append(g2)
            ms.append(m)
            if search(g2, k + 1, chain, ms):
                return True
            chain.pop()
            ms.pop()
        return False

    chain: list[Graph] = []
    ms: list[Matching] = []
    try:
        ok = search(f, 0, chain, ms)
    except _Budget:
        return Admissibility(False, n, tuple(best), tuple(best_m), "search budget exceeded")
    if ok:
        return Admissibility(True, n, tuple(chain), tuple(ms))
    return Admissibility(False, n, reason=f"no chain of {n} rewrites reaches F'")


class _Budget(Exception):
    pass


@dataclass(frozen=True)
class InducedTransform:
    trace: DerivationTrace
    rule: RuleSpan
    results: tuple[TransformResult, ...] = field(default_factory=tuple)


def enumerate_induced(b: BESG, p: RewritePattern, max_size: int) -> Iterator[InducedTransform]:
    """Instantiations of ``p`` (lhs size at most ``max_size``) that apply to ``b``."""
    rep = is_match_exhaustive(p.b1)
    if not rep:
        raise GrammarError(f"pattern's first grammar is not match-exhaustive: {rep.first}")
    rep = validate_besg(b)
    if not rep:
        raise GrammarError(f"not a valid B-ESG grammar: {rep.first}")
    rep = validate_pattern(p)
    if not rep:
        raise PatternError(f"invalid rewrite pattern: {rep.first}")

    def prune(form: Graph) -> bool:
        return decoded_size_lower_bound(form, p.b1.decoder) <= max_size

    for _, trace in completing_traces(p.b1.grammar, max_size, prune):
        rule = instantiate(p, trace)
        if rule.lhs.size > max_size:
            continue
        results = transform_step(b, rule)
        if results:
            yield InducedTransform(trace, rule, tuple(results))
