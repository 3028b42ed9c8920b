"""edNCE vertex-replacement grammars with the boundary (B-edNCE) restriction.

Substituting a production for non-terminal ``v`` copies the body in under
hierarchical names ``v.<body-vertex>``.  Because names only depend on the
substituted vertex, the same derivation trace can be replayed in any grammar
whose bodies use the same vertex names, which is what rewrite patterns rely on.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional

from .graph import Alphabets, Edge, Graph, GraphError, IsoIndex, Report, Violation

IN, OUT = "in", "out"


class GrammarError(GraphError):
    pass


@dataclass(frozen=True, order=True)
class ConnectionInstruction:
    """On substitution, every ``old``-labelled edge between a ``neighbour``-labelled
    vertex and the non-terminal (in direction ``direction``) becomes a
    ``new``-labelled edge to body vertex ``target``."""

    neighbour: str
    old: str
    new: str
    target: str
    direction: str

    def __post_init__(self) -> None:
        if self.direction not in (IN, OUT):
            raise GrammarError(f"direction must be 'in' or 'out', not {self.direction!r}")

    def as_tuple(self) -> tuple[str, str, str, str, str]:
        return (self.neighbour, self.old, self.new, self.target, self.direction)


@dataclass(frozen=True)
class Production:
    name: str
    head: str
    body: Graph
    connections: frozenset[ConnectionInstruction] = frozenset()

    def __post_init__(self) -> None:
        conns = frozenset(c if isinstance(c, ConnectionInstruction)
                          else ConnectionInstruction(*c) for c in self.connections)
        object.__setattr__(self, "connections", conns)
        for c in conns:
            if c.target not in self.body.vertices:
                raise GrammarError(f"production {self.name!r}: instruction target "
                                   f"{c.target!r} is not in the body")

    @property
    def sorted_connections(self) -> list[ConnectionInstruction]:
        return sorted(self.connections)


@dataclass(frozen=True)
class Grammar:
    alphabets: Alphabets
    productions: Mapping[str, Production]
    start: str = "S"

    def __post_init__(self) -> None:
        prods = self.productions
        if not isinstance(prods, Mapping):
            prods = {p.name: p for p in prods}
        object.__setattr__(self, "productions", dict(sorted(prods.items())))
        nts = self.alphabets.nonterminal_labels
        if self.start not in nts:
            raise GrammarError(f"start symbol {self.start!r} is not a non-terminal label")
        for name, p in self.productions.items():
            if name != p.name:
                raise GrammarError(f"production stored under {name!r} is named {p.name!r}")
            if p.head not in nts:
                raise GrammarError(f"production {name!r} has terminal head {p.head!r}")
        if not self.for_head(self.start):
            raise GrammarError(f"start symbol {self.start!r} has no production")

    def for_head(self, label: str) -> list[Production]:
        return [p for p in self.productions.values() if p.head == label]

    def start_graph(self) -> Graph:
        return Graph(self.alphabets, {self.start: self.start})

    def replace_production(self, p: Production) -> Grammar:
        prods = dict(self.productions)
        prods[p.name] = p
        return Grammar(self.alphabets, prods, self.start)


@dataclass(frozen=True)
class DerivationTrace:
    steps: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple((str(v), str(p)) for v, p in self.steps))

    def __add__(self, other: DerivationTrace) -> DerivationTrace:
        return DerivationTrace(self.steps + other.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def then(self, vertex: str, production: str) -> DerivationTrace:
        return DerivationTrace(self.steps + ((vertex, production),))

    def count(self, production: str) -> int:
        return sum(1 for _, p in self.steps if p == production)


def substitute(h: Graph, v: str, p: Production) -> Graph:
    if v not in h.vertices:
        raise GrammarError(f"unknown vertex {v!r}")
    if not h.is_nonterminal(v):
        raise GrammarError(f"{v!r} is not a non-terminal")
    if h.vertices[v] != p.head:
        raise GrammarError(f"{v!r} has label {h.vertices[v]!r} but production "
                           f"{p.name!r} rewrites {p.head!r}")
    rename = {x: f"{v}.{x}" for x in p.body.vertices}
    verts = {x: lab for x, lab in h.vertices.items() if x != v}
    for x, lab in p.body.vertices.items():
        if rename[x] in verts:
            raise GrammarError(f"substitution would reuse the name {rename[x]!r}")
        verts[rename[x]] = lab
    edges: set[Edge] = {e for e in h.edges if v not in (e[0], e[2])}
    edges.update((rename[s], lab, rename[t]) for s, lab, t in p.body.edges)
    conns = p.sorted_connections
    for w, beta, _ in h.in_edges(v):
        for c in conns:
            if c.direction == IN and c.old == beta and c.neighbour == h.vertices[w]:
                edges.add((w, c.new, rename[c.target]))
    for _, beta, w in h.out_edges(v):
        for c in conns:
            if c.direction == OUT and c.old == beta and c.neighbour == h.vertices[w]:
                edges.add((rename[c.target], c.new, w))
    return Graph(h.alphabets.union(p.body.alphabets), verts, frozenset(edges))


def derive(g: Grammar, t: DerivationTrace, start: Optional[Graph] = None) -> Graph:
    h = g.start_graph() if start is None else start
    for i, (v, name) in enumerate(t.steps):
        if name not in g.productions:
            raise GrammarError(f"step {i}: unknown production {name!r}")
        try:
            h = substitute(h, v, g.productions[name])
        except GrammarError as exc:
            raise GrammarError(f"step {i}: {exc}") from exc
    return h


def derive_steps(g: Grammar, t: DerivationTrace) -> Iterator[Graph]:
    """Every sentential form along ``t``, starting with the start graph."""
    h = g.start_graph()
    yield h
    for i in range(len(t)):
        h = derive(g, DerivationTrace(t.steps[i:i + 1]), start=h)
        yield h


def is_boundary(g: Grammar) -> Report:
    out: list[Violation] = []
    nts = g.alphabets.nonterminal_labels
    for name, p in g.productions.items():
        for e in p.body.sorted_edges:
            if p.body.is_nonterminal(e[0]) and p.body.is_nonterminal(e[2]):
                out.append(Violation("adjacent-nonterminals",
                                     f"{name}: body edge {e!r} joins two non-terminals",
                                     (name, e)))
        for c in p.sorted_connections:
            if c.neighbour in nts:
                out.append(Violation("nonterminal-instruction",
                                     f"{name}: instruction {c.as_tuple()!r} is keyed on a "
                                     "non-terminal label", (name, c.as_tuple())))
    return Report(tuple(out))


def check_reduced(g: Grammar) -> Report:
    """No empty productions and no bodies made of a single non-terminal."""
    out: list[Violation] = []
    for name, p in g.productions.items():
        if not p.body.vertices:
            out.append(Violation("3", f"{name}: empty production", (name,)))
        elif len(p.body.vertices) == 1 and p.body.nonterminals:
            out.append(Violation("4", f"{name}: body is a single non-terminal", (name,)))
    return Report(tuple(out))


def derives_relation(g: Grammar) -> dict[str, set[str]]:
    """Non-terminal label -> labels of non-terminals in any of its bodies."""
    rel: dict[str, set[str]] = {x: set() for x in g.alphabets.nonterminal_labels}
    for p in g.productions.values():
        rel[p.head].update(p.body.vertices[v] for v in p.body.nonterminals)
    return rel


def enumerate_sentential_forms(g: Grammar, max_vertices: int,
                               prune: Optional[Callable[[Graph], bool]] = None
                               ) -> Iterator[tuple[Graph, DerivationTrace]]:
    """Breadth-first over derivable forms with at most ``max_vertices`` vertices.

    Forms are kept up to isomorphism, each with one witness trace.  ``prune``
    may reject forms early; it must be monotone (never reject a form whose
    descendants could be wanted).
    """
    rep = check_reduced(g)
    if not rep:
        raise GrammarError(f"grammar is not reduced, so forms may shrink: {rep.first}")
    start = g.start_graph()
    if max_vertices < len(start.vertices) or (prune is not None and not prune(start)):
        return
    seen = IsoIndex()
    seen.add(start)
    queue = deque([(start, DerivationTrace())])
    while queue:
        form, trace = queue.popleft()
        yield form, trace
        for v in form.nonterminals:
            for p in g.for_head(form.vertices[v]):
                new = substitute(form, v, p)
                if len(new.vertices) > max_vertices:
                    continue
                if prune is not None and not prune(new):
                    continue
                if seen.add(new):
                    queue.append((new, trace.then(v, p.name)))


def completing_traces(g: Grammar, max_vertices: int,
                      prune: Optional[Callable[[Graph], bool]] = None
                      ) -> Iterator[tuple[Graph, DerivationTrace]]:
    for form, trace in enumerate_sentential_forms(g, max_vertices, prune):
        if not form.nonterminals:
            yield form, trace


def leftmost_traces(g: Grammar, max_steps: int) -> Iterator[DerivationTrace]:
    """All completing traces that always expand the least-named non-terminal.

    Unlike :func:`enumerate_sentential_forms` this does not merge isomorphic
    forms, so every distinct production sequence appears.
    """
    def rec(form: Graph, trace: DerivationTrace) -> Iterator[DerivationTrace]:
        if not form.nonterminals:
            yield trace
            return
        if len(trace) >= max_steps:
            return
        v = form.nonterminals[0]
        for p in g.for_head(form.vertices[v]):
            yield from rec(substitute(form, v, p), trace.then(v, p.name))

    yield from rec(g.start_graph(), DerivationTrace())


def nonterminal_free(g: Graph) -> bool:
    return not g.nonterminals


def random_trace(g: Grammar, rng: random.Random, max_steps: int = 12) -> DerivationTrace:
    """A random completing trace; after ``max_steps`` steps only productions
    without non-terminals are chosen (and any such production if none is)."""
    form = g.start_graph()
    trace = DerivationTrace()
    while form.nonterminals:
        v = rng.choice(form.nonterminals)
        options = g.for_head(form.vertices[v])
        if len(trace) >= max_steps:
            closing = [p for p in options if not p.body.nonterminals]
            options = closing or options
        p = rng.choice(options)
        form = substitute(form, v, p)
        trace = trace.then(v, p.name)
        if len(trace) > 50 * max(max_steps, 1):
            raise GrammarError("random derivation does not terminate")
    return trace
