"""Membership and match enumeration for B-ESG grammars.

Both procedures search bounded spaces: wire lengths are bounded by the
longest wire chain in any body or decoding rule, and reduced grammars never
shrink a sentential form, so breadth-first search up to a vertex budget is
complete.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .besg import (BESG, DecodingSystem, decode, decoded_counts_lower_bound,
                   max_wire_bound, validate_besg)
from .grammar import (DerivationTrace, Grammar, GrammarError, check_reduced, derive,
                      enumerate_sentential_forms)
from .graph import (Graph, IsoIndex, Report, Violation,
                    _require_string_graph, _wires, grow_wire_vertex,
                    minimal_representative)
from .matching import Matching, find_embeddings, find_matchings


# -- match-exhaustive grammars -------------------------------------------------


def _bare_wires(body: Graph) -> int:
    """Wire chains of a body with no node-vertex or non-terminal attached."""
    seen: set[str] = set()
    count = 0
    for v in body.wire_vertices:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        attached = False
        while stack:
            x = stack.pop()
            for y in body.neighbours(x):
                if body.is_wire(y):
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
                else:
                    attached = True
        seen |= comp
        if attached or not any(body.incident(x) for x in comp):
            continue
        # a chain whose every vertex has in- and out-degree one is a circle
        if all(body.in_edges(x) and body.out_edges(x) for x in comp):
            continue
        count += 1
    return count


def bare_wire_bound(g: Grammar) -> Optional[int]:
    """Most bare wires any derivation can create, or None if unbounded.

    Computed as the value of derivation trees of increasing depth; a finite
    value is reached by depth |non-terminals|, and a positive cycle keeps
    growing past twice that.
    """
    nts = sorted(g.alphabets.nonterminal_labels)
    bare = {name: _bare_wires(p.body) for name, p in g.productions.items()}
    value = {x: 0 for x in nts}

    def step(val: dict[str, int]) -> dict[str, int]:
        new = {}
        for x in nts:
            best = 0
            for p in g.for_head(x):
                best = max(best, bare[p.name] + sum(val[p.body.vertices[y]]
                                                   for y in p.body.nonterminals))
            new[x] = best
        return new

    k = len(nts) + 1
    for _ in range(k):
        value = step(value)
    settled = value
    for _ in range(k):
        value = step(value)
    if value[g.start] != settled[g.start]:
        return None
    return settled[g.start]


def is_match_exhaustive(b: BESG) -> Report:
    g = b.grammar
    out: list[Violation] = []
    if bare_wire_bound(g) is None:
        cyc = sorted(name for name, p in g.productions.items() if _bare_wires(p.body))
        out.append(Violation("1", "productions with bare wires can be used without bound: "
                                  + ", ".join(cyc), tuple(cyc)))
    for name, p in g.productions.items():
        for v in p.body.wire_vertices:
            if not p.body.incident(v):
                out.append(Violation("2", f"{name}: isolated wire-vertex {v!r}", (name, v)))
    out.extend(check_reduced(g).violations)
    return Report(tuple(out))


# -- membership ----------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    h_tilde: Graph
    encoded: Graph
    trace: DerivationTrace


@dataclass(frozen=True)
class MembershipAnswer:
    member: bool
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.member


def _require_decidable(b: BESG) -> None:
    rep = validate_besg(b)
    if not rep:
        raise GrammarError(f"not a valid B-ESG grammar: {rep.first}")
    rep = check_reduced(b.grammar)
    if not rep:
        raise GrammarError(f"grammar must be reduced: {rep.first}")


def wire_variants(h: Graph, bound: int) -> Iterator[Graph]:
    """Graphs ~ ``h`` whose wires are at most ``max(bound, minimal length)`` long."""
    h0 = minimal_representative(h)
    slots = []
    for w in _wires(h0):
        extra = max(bound, w.minimal_length) - len(w.path)
        slots.append((w.path, max(extra, 0)))
    options = []
    for path, extra in slots:
        opts = []
        for total in range(extra + 1):
            for split in _compositions(total, len(path)):
                opts.append(tuple(zip(path, split)))
        options.append(opts)
    for choice in itertools.product(*options):
        g = h0
        for part in choice:
            for v, k in part:
                g = grow_wire_vertex(g, v, k)
        yield g


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def decoder_occurrences(h: Graph, t: DecodingSystem) -> list[tuple[str, str, str, frozenset]]:
    """(left image, alpha, right image, interior images) of every decoder rhs in ``h``."""
    found = set()
    for r in t:
        for m in find_embeddings(r.rhs, h, (r.left, r.right)):
            interior = frozenset(m[v] for v in r.rhs.vertices if v not in (r.left, r.right))
            found.add((m[r.left], r.alpha, m[r.right], interior))
    return sorted(found, key=lambda o: (o[0], o[1], o[2], sorted(o[3])))


def inverse_decodings(h: Graph, t: DecodingSystem) -> Iterator[Graph]:
    """Every encoded graph that decodes to ``h``: fold any set of disjoint occurrences."""
    occ = decoder_occurrences(h, t)
    alph = h.alphabets
    for r in t:
        alph = alph.union(r.rhs.alphabets)
    h = h.replace(alphabets=alph)

    def rec(i: int, g: Graph, used: frozenset) -> Iterator[Graph]:
        if i == len(occ):
            yield g
            return
        yield from rec(i + 1, g, used)
        u, alpha, v, interior = occ[i]
        if interior & used or u in used or v in used:
            return
        if any(e[0] == u and e[2] == v for e in g.edges):
            return
        folded = g.without(interior)
        folded = folded.replace(edges=folded.edges | {(u, alpha, v)})
        yield from rec(i + 1, folded, used | interior)

    yield from rec(0, h, frozenset())


def membership(h: Graph, b: BESG) -> MembershipAnswer:
    """Decide whether some graph wire-homeomorphic to ``h`` is in L(B)."""
    _require_string_graph(h)
    _require_decidable(b)
    bound = max_wire_bound(b)
    candidates = list(wire_variants(h, bound))
    if not candidates:
        return MembershipAnswer(False)
    n_nodes = len(h.node_vertices)
    max_wires = max(len(c.wire_vertices) for c in candidates)
    max_vertices = max(len(c.vertices) for c in candidates)

    def prune(form: Graph) -> bool:
        nodes, wires = decoded_counts_lower_bound(form, b.decoder)
        return nodes <= n_nodes and wires <= max_wires

    terminal = IsoIndex()
    for form, trace in enumerate_sentential_forms(b.grammar, max_vertices, prune):
        if not form.nonterminals:
            terminal.add(form, trace)
    if not len(terminal):
        return MembershipAnswer(False)
    for cand in candidates:
        for enc in inverse_decodings(cand, b.decoder):
            hit = terminal.find(enc)
            if hit is None:
                continue
            _, trace = hit
            encoded = derive(b.grammar, trace)
            return MembershipAnswer(True, Witness(cand, encoded, trace))
    return MembershipAnswer(False)


# -- match enumeration ---------------------------------------------------------


@dataclass(frozen=True)
class MatchResult:
    trace: DerivationTrace
    k: Graph
    matching: Matching


def count_wires(h: Graph) -> int:
    h0 = minimal_representative(h)
    return len(_wires(h0)) + sum(1 for v in h0.wire_vertices if not h0.incident(v))


def enumerate_matches(h: Graph, b: BESG) -> list[MatchResult]:
    """Every member K of L(B), up to isomorphism, with each matching of K into h.

    K is bounded by the node-vertices of ``h`` and by 2W + n wires of at most
    ``max_wire_bound`` vertices, where W counts the wires of ``h`` and n the
    bare wires the grammar can produce.
    """
    _require_string_graph(h)
    rep = validate_besg(b)
    if not rep:
        raise GrammarError(f"not a valid B-ESG grammar: {rep.first}")
    rep = is_match_exhaustive(b)
    if not rep:
        raise GrammarError(f"grammar is not match-exhaustive: {rep.first}")
    n_bare = bare_wire_bound(b.grammar) or 0
    max_k_wires = 2 * count_wires(h) + n_bare
    wire_len = max(max_wire_bound(b), 2)
    max_wire_vertices = max_k_wires * wire_len
    n_nodes = len(h.node_vertices)

    def prune(form: Graph) -> bool:
        nodes, wires = decoded_counts_lower_bound(form, b.decoder)
        return nodes <= n_nodes and wires <= max_wire_vertices

    results: list[MatchResult] = []
    seen = IsoIndex()
    for form, trace in enumerate_sentential_forms(b.grammar, n_nodes + max_wire_vertices,
                                                  prune):
        if form.nonterminals:
            continue
        k = decode(form, b.decoder)
        if len(k.node_vertices) > n_nodes or count_wires(k) > max_k_wires:
            continue
        if not seen.add(k):
            continue
        for m in find_matchings(k, h):
            results.append(MatchResult(trace, k, m))
    return results
