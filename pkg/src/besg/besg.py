"""B-ESG grammars: a boundary grammar producing encoded string graphs, plus a
decoding system that expands every encoding edge into a fixed string graph.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from .graph import (Graph, GraphError, IsoIndex, Report, Violation, check_string_graph)
from .grammar import (IN, OUT, DerivationTrace, Grammar, GrammarError, derive,
                      enumerate_sentential_forms, is_boundary)

log = logging.getLogger(__name__)

Triple = tuple[str, str, str]


@dataclass(frozen=True)
class DecodeRule:
    alpha: str
    n1: str
    n2: str
    rhs: Graph
    left: str
    right: str

    @property
    def triple(self) -> Triple:
        return (self.alpha, self.n1, self.n2)

    def growth(self) -> int:
        """Change in vertex+edge count when this rule replaces one edge."""
        return len(self.rhs.vertices) - 2 + len(self.rhs.edges) - 1


def _connected(g: Graph) -> bool:
    if not g.vertices:
        return True
    start = next(iter(g.vertices))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in g.neighbours(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(g.vertices)


def check_decode_rule(r: DecodeRule) -> Report:
    out: list[Violation] = []
    tag = f"decoder {r.triple}"
    rep = check_string_graph(r.rhs)
    if not rep:
        out.append(Violation("T", f"{tag}: rhs is not a string graph: {rep.first}"))
        return Report(tuple(out))
    if r.alpha not in r.rhs.alphabets.encoding_labels:
        out.append(Violation("T", f"{tag}: {r.alpha!r} is not an encoding label"))
    if not _connected(r.rhs):
        out.append(Violation("T", f"{tag}: rhs is not connected"))
    for v in r.rhs.wire_vertices:
        if not r.rhs.in_edges(v) or not r.rhs.out_edges(v):
            out.append(Violation("T", f"{tag}: rhs has boundary wire-vertex {v!r}", (v,)))
    for end, lab in ((r.left, r.n1), (r.right, r.n2)):
        if end not in r.rhs.vertices or not r.rhs.is_node(end):
            out.append(Violation("T", f"{tag}: endpoint {end!r} is not a node-vertex"))
        elif r.rhs.vertices[end] != lab:
            out.append(Violation("T", f"{tag}: endpoint {end!r} should be labelled {lab!r}"))
    if r.left == r.right:
        out.append(Violation("T", f"{tag}: endpoints must be distinct"))
    return Report(tuple(out))


@dataclass(frozen=True)
class DecodingSystem:
    rules: Mapping[Triple, DecodeRule]

    def __post_init__(self) -> None:
        rules = self.rules
        if not isinstance(rules, Mapping):
            rules = {r.triple: r for r in rules}
        object.__setattr__(self, "rules", dict(sorted(rules.items())))
        for key, r in self.rules.items():
            if key != r.triple:
                raise GraphError(f"decoder rule stored under {key} is for {r.triple}")

    def __iter__(self) -> Iterator[DecodeRule]:
        return iter(self.rules.values())

    def get(self, triple: Triple) -> Optional[DecodeRule]:
        return self.rules.get(triple)

    def validate(self) -> Report:
        out: list[Violation] = []
        for r in self:
            out.extend(check_decode_rule(r).violations)
        return Report(tuple(out))


@dataclass(frozen=True)
class BESG:
    grammar: Grammar
    decoder: DecodingSystem

    @property
    def alphabets(self):
        return self.grammar.alphabets


def is_encoded_string_graph(g: Graph) -> Report:
    return check_string_graph(g, allow_encoding=True)


def _check_n1(name: str, body: Graph, out: list[Violation]) -> None:
    for e in body.sorted_edges:
        s, _, t = e
        enc = body.is_encoding(e)
        if body.is_nonterminal(s) or body.is_nonterminal(t):
            other = t if body.is_nonterminal(s) else s
            if enc and not body.is_nonterminal(other) and not body.is_node(other):
                out.append(Violation("N1", f"{name}: encoding edge {e!r} touches a "
                                           "wire-vertex", (name, e)))
            continue
        both_nodes = body.is_node(s) and body.is_node(t)
        if enc != both_nodes:
            what = ("joins node-vertices without an encoding label" if both_nodes
                    else "carries an encoding label off a node pair")
            out.append(Violation("N1", f"{name}: body edge {e!r} {what}", (name, e)))


def validate_besg(b: BESG) -> Report:
    """Check the boundary condition and N1, N2, W1-W4 on every production."""
    g = b.grammar
    alph = g.alphabets
    out: list[Violation] = list(is_boundary(g).violations)
    out.extend(b.decoder.validate().violations)
    for name, p in g.productions.items():
        body = p.body
        _check_n1(name, body, out)
        for c in p.sorted_connections:
            if c.neighbour in alph.node_labels and body.is_node(c.target) \
                    and c.new not in alph.encoding_labels:
                out.append(Violation("N2", f"{name}: instruction {c.as_tuple()!r} joins "
                                           "node-vertices without an encoding label",
                                     (name, c.as_tuple())))
        for v in body.wire_vertices:
            if len(body.in_edges(v)) > 1 or len(body.out_edges(v)) > 1:
                out.append(Violation("W1", f"{name}: wire-vertex {v!r} has in/out-degree "
                                           f"{len(body.in_edges(v))}/{len(body.out_edges(v))}",
                                     (name, v)))
        for c in p.sorted_connections:
            if body.is_wire(c.target):
                out.append(Violation("W2", f"{name}: instruction {c.as_tuple()!r} targets a "
                                           "wire-vertex", (name, c.as_tuple())))
        keyed: dict[tuple[str, str, str], list] = defaultdict(list)
        for c in p.sorted_connections:
            if c.neighbour in alph.wire_labels:
                keyed[(c.neighbour, c.old, c.direction)].append(c)
                if c.new in alph.encoding_labels:
                    out.append(Violation("W3", f"{name}: instruction {c.as_tuple()!r} emits "
                                               "an encoding label next to a wire",
                                         (name, c.as_tuple())))
        for key, cs in sorted(keyed.items()):
            if len(cs) > 1:
                out.append(Violation("W3", f"{name}: {len(cs)} instructions for wire "
                                           f"neighbours {key}", (name, key)))
        out.extend(_check_w4(g, name, p))
    return Report(tuple(out))


def _w4_demands(p, alph) -> list[tuple[str, str, str, str]]:
    """(non-terminal vertex, wire label, edge label, direction) obligations."""
    body = p.body
    demands = []
    for y in body.nonterminals:
        for s, lab, _ in body.in_edges(y):
            if body.is_wire(s):
                demands.append((y, body.vertices[s], lab, IN))
        for _, lab, t in body.out_edges(y):
            if body.is_wire(t):
                demands.append((y, body.vertices[t], lab, OUT))
    for c in p.sorted_connections:
        if c.neighbour in alph.wire_labels and body.is_nonterminal(c.target):
            demands.append((c.target, c.neighbour, c.new, c.direction))
    return demands


def _check_w4(g: Grammar, name: str, p) -> list[Violation]:
    out = []
    for y, wlab, beta, d in sorted(set(_w4_demands(p, g.alphabets))):
        for q in g.for_head(p.body.vertices[y]):
            if not any(c.neighbour == wlab and c.old == beta and c.direction == d
                       for c in q.connections):
                out.append(Violation("W4", f"{name}: {y!r} meets a {wlab!r} wire via "
                                           f"{beta!r}/{d} but production {q.name!r} has no "
                                           "matching instruction", (name, y, q.name)))
    return out


def occurring_triples(b: BESG) -> set[Triple]:
    """Encoding triples that can occur, read off bodies and node-to-node instructions."""
    g = b.grammar
    alph = g.alphabets
    found: set[Triple] = set()
    for p in g.productions.values():
        body = p.body
        for s, lab, t in body.edges:
            if lab in alph.encoding_labels and body.is_node(s) and body.is_node(t):
                found.add((lab, body.vertices[s], body.vertices[t]))
        for c in p.connections:
            if c.neighbour in alph.node_labels and body.is_node(c.target) \
                    and c.new in alph.encoding_labels:
                lt = body.vertices[c.target]
                found.add((c.new, c.neighbour, lt) if c.direction == IN
                          else (c.new, lt, c.neighbour))
    return found


def missing_decoder_rules(b: BESG) -> list[Triple]:
    missing = sorted(t for t in occurring_triples(b) if b.decoder.get(t) is None)
    for t in missing:
        log.warning("no decoding rule for encoding triple %s", t)
    return missing


def decode(g: Graph, t: DecodingSystem) -> Graph:
    """Replace encoding edges (in sorted order) until none remain."""
    rep = is_encoded_string_graph(g)
    if not rep:
        raise GraphError(f"not an encoded string graph: {rep.first}")
    return _decode(g, t)


def _decode(g: Graph, t: DecodingSystem, order: Optional[list] = None) -> Graph:
    verts = dict(g.vertices)
    edges = set(g.edges)
    alph = g.alphabets
    pending = [e for e in g.sorted_edges if e[1] in alph.encoding_labels]
    if order is not None:
        pending = list(order)
    for e in pending:
        u, alpha, v = e
        rule = t.get((alpha, g.vertices[u], g.vertices[v]))
        if rule is None:
            raise GraphError(f"no decoding rule for {(alpha, g.vertices[u], g.vertices[v])}")
        edges.discard(e)
        names = {rule.left: u, rule.right: v}
        for x in sorted(rule.rhs.vertices):
            if x not in names:
                base = f"<{u},{alpha},{v}>.{x}"
                name = base
                i = 1
                while name in verts:
                    name = f"{base}#{i}"
                    i += 1
                names[x] = name
                verts[name] = rule.rhs.vertices[x]
        edges.update((names[s], lab, names[w]) for s, lab, w in rule.rhs.edges)
        alph = alph.union(rule.rhs.alphabets)
    return Graph(alph, verts, frozenset(edges))


def decode_in_order(g: Graph, t: DecodingSystem, order: list) -> Graph:
    """Decode encoding edges in the given order (a permutation of them)."""
    enc = sorted(e for e in g.edges if e[1] in g.alphabets.encoding_labels)
    if sorted(order) != enc:
        raise GraphError("order must list every encoding edge exactly once")
    return _decode(g, t, order)


def concrete_derive(b: BESG, t: DerivationTrace) -> Graph:
    h1 = derive(b.grammar, t)
    if h1.nonterminals:
        raise GrammarError(f"derivation leaves non-terminals {list(h1.nonterminals)}")
    h2 = decode(h1, b.decoder)
    rep = check_string_graph(h2)
    if not rep:
        raise GraphError(f"decoded graph is not a string graph: {rep.first}")
    return h2


def chain_lengths(g: Graph) -> list[int]:
    """Sizes of the wire-vertex chains that have at least one incident edge.

    Works on sentential forms and bodies too: chains are components of the
    wire-vertex-only subgraph, and a lone wire-vertex counts once it touches
    anything.
    """
    seen: set[str] = set()
    sizes = []
    for v in g.wire_vertices:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in g.neighbours(x):
                if g.is_wire(y) and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        if any(g.incident(x) for x in comp):
            sizes.append(len(comp))
    return sizes


def max_wire_bound(b: BESG) -> int:
    bodies = [p.body for p in b.grammar.productions.values()]
    bodies += [r.rhs for r in b.decoder]
    return max((n for body in bodies for n in chain_lengths(body)), default=0)


def decoded_size_lower_bound(form: Graph, t: DecodingSystem) -> int:
    """Lower bound on vertices+edges of any decoded graph derived from ``form``.

    Terminal vertices and edges between them are never removed, every
    non-terminal turns into at least one vertex, and each encoding edge already
    present will be decoded.
    """
    total = len(form.vertices)
    for e in form.edges:
        s, lab, w = e
        if form.is_nonterminal(s) or form.is_nonterminal(w):
            continue
        total += 1
        if lab in form.alphabets.encoding_labels:
            rule = t.get((lab, form.vertices[s], form.vertices[w]))
            if rule is not None:
                total += rule.growth()
    return total


def decoded_counts_lower_bound(form: Graph, t: DecodingSystem) -> tuple[int, int]:
    """Lower bounds on (node-vertices, wire-vertices) after completion and decoding."""
    nodes = len(form.node_vertices)
    wires = len(form.wire_vertices)
    for s, lab, w in form.edges:
        if lab in form.alphabets.encoding_labels and form.is_node(s) and form.is_node(w):
            rule = t.get((lab, form.vertices[s], form.vertices[w]))
            if rule is not None:
                nodes += len(rule.rhs.node_vertices) - 2
                wires += len(rule.rhs.wire_vertices)
    return nodes, wires


def enumerate_language(b: BESG, max_size: int) -> Iterator[tuple[Graph, Graph, DerivationTrace]]:
    """Members of L(B) with at most ``max_size`` vertices+edges, up to isomorphism.

    Yields (decoded member, encoded form, witness trace).
    """
    seen = IsoIndex()

    def prune(form: Graph) -> bool:
        return decoded_size_lower_bound(form, b.decoder) <= max_size

    for form, trace in enumerate_sentential_forms(b.grammar, max_size, prune):
        if form.nonterminals:
            continue
        member = decode(form, b.decoder)
        if member.size <= max_size and seen.add(member):
            yield member, form, trace
