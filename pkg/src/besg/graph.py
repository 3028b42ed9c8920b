"""Labelled directed graphs and string-graph structure.

A :class:`Graph` is an immutable value: a mapping from vertex names to labels
and a set of ``(source, label, target)`` edges.  Every label is drawn from an
:class:`Alphabets` instance carried by the graph, which is what lets us tell
node-vertices, wire-vertices and non-terminals apart.

Operations that create vertices use derived names so runs are reproducible:

* ``split_wire_vertex(g, v)`` keeps ``v`` as the first half and names the
  second half ``v~1`` (``v~2``, ... if taken).
* ``stretch_wire`` inserts ``first~1``, ``first~2``, ... after the first vertex
  of the wire (before it on a one-vertex wire ending in an output).
* ``merge_wire_vertices(g, u, v)`` keeps the name ``u``.
"""

from __future__ import annotations

import enum
import hashlib
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional

Edge = tuple[str, str, str]


class GraphError(ValueError):
    """Raised for malformed graphs and violated operation preconditions."""


@dataclass(frozen=True)
class Violation:
    condition: str
    message: str
    witness: tuple = ()

    def __str__(self) -> str:
        return f"[{self.condition}] {self.message}"


@dataclass(frozen=True)
class Report:
    """Outcome of a validation: truthy iff there are no violations."""

    violations: tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return not self.violations

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


def _frozen(labels: Iterable[str]) -> frozenset[str]:
    if isinstance(labels, str):
        raise TypeError("expected a collection of labels, got a string")
    return frozenset(labels)


@dataclass(frozen=True)
class Alphabets:
    node_labels: frozenset[str]
    wire_labels: frozenset[str]
    nonterminal_labels: frozenset[str] = frozenset()
    edge_labels: frozenset[str] = frozenset()
    encoding_labels: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        for name in ("node_labels", "wire_labels", "nonterminal_labels",
                     "edge_labels", "encoding_labels"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        n, w, x = self.node_labels, self.wire_labels, self.nonterminal_labels
        if n & w or n & x or w & x:
            raise GraphError("node, wire and non-terminal labels must be disjoint")
        if not self.encoding_labels <= self.edge_labels:
            raise GraphError("encoding labels must be a subset of the edge labels")

    @property
    def vertex_labels(self) -> frozenset[str]:
        return self.node_labels | self.wire_labels | self.nonterminal_labels

    def union(self, other: Alphabets) -> Alphabets:
        return Alphabets(self.node_labels | other.node_labels,
                         self.wire_labels | other.wire_labels,
                         self.nonterminal_labels | other.nonterminal_labels,
                         self.edge_labels | other.edge_labels,
                         self.encoding_labels | other.encoding_labels)


class VertexKind(enum.Enum):
    NODE = "NodeVertex"
    WIRE = "WireVertex"
    NONTERMINAL = "NonTerminal"


@dataclass(frozen=True, eq=False)
class Graph:
    """Labelled directed graph without self-loops; edges form a set."""

    alphabets: Alphabets
    vertices: Mapping[str, str] = field(default_factory=dict)
    edges: frozenset[Edge] = frozenset()

    def __post_init__(self) -> None:
        verts = dict(sorted(self.vertices.items()))
        object.__setattr__(self, "vertices", MappingProxyType(verts))
        edges = frozenset(tuple(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        labels = self.alphabets.vertex_labels
        for v, lab in verts.items():
            if lab not in labels:
                raise GraphError(f"vertex {v!r} has unknown label {lab!r}")
        for s, lab, t in edges:
            if s not in verts or t not in verts:
                raise GraphError(f"edge {(s, lab, t)!r} has a missing endpoint")
            if s == t:
                raise GraphError(f"self-loop on {s!r} is not allowed")
            if lab not in self.alphabets.edge_labels:
                raise GraphError(f"edge {(s, lab, t)!r} has unknown label {lab!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.alphabets == other.alphabets
                and dict(self.vertices) == dict(other.vertices)
                and self.edges == other.edges)

    def __hash__(self) -> int:
        return hash((frozenset(self.vertices.items()), self.edges))

    def __repr__(self) -> str:
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self.vertices

    @property
    def size(self) -> int:
        """Vertices plus edges."""
        return len(self.vertices) + len(self.edges)

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def _adjacency(self) -> tuple[dict[str, list[Edge]], dict[str, list[Edge]]]:
        ins: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        outs: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.sorted_edges:
            outs[e[0]].append(e)
            ins[e[2]].append(e)
        return ins, outs

    def in_edges(self, v: str) -> list[Edge]:
        return self._adjacency[0][v]

    def out_edges(self, v: str) -> list[Edge]:
        return self._adjacency[1][v]

    def incident(self, v: str) -> list[Edge]:
        return self.in_edges(v) + self.out_edges(v)

    def degree(self, v: str) -> int:
        return len(self.in_edges(v)) + len(self.out_edges(v))

    def neighbours(self, v: str) -> set[str]:
        return {e[0] for e in self.in_edges(v)} | {e[2] for e in self.out_edges(v)}

    def kind(self, v: str) -> VertexKind:
        lab = self.vertices[v]
        if lab in self.alphabets.node_labels:
            return VertexKind.NODE
        if lab in self.alphabets.wire_labels:
            return VertexKind.WIRE
        return VertexKind.NONTERMINAL

    def is_node(self, v: str) -> bool:
        return self.vertices[v] in self.alphabets.node_labels

    def is_wire(self, v: str) -> bool:
        return self.vertices[v] in self.alphabets.wire_labels

    def is_nonterminal(self, v: str) -> bool:
        return self.vertices[v] in self.alphabets.nonterminal_labels

    def is_encoding(self, e: Edge) -> bool:
        return e[1] in self.alphabets.encoding_labels

    @cached_property
    def node_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.is_node(v))

    @cached_property
    def wire_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.is_wire(v))

    @cached_property
    def nonterminals(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.is_nonterminal(v))

    # -- functional updates -------------------------------------------------

    def replace(self, vertices: Optional[Mapping[str, str]] = None,
                edges: Optional[Iterable[Edge]] = None,
                alphabets: Optional[Alphabets] = None) -> Graph:
        return Graph(alphabets or self.alphabets,
                     self.vertices if vertices is None else vertices,
                     self.edges if edges is None else frozenset(edges))

    def without(self, names: Iterable[str]) -> Graph:
        """Delete vertices and every incident edge."""
        drop = set(names)
        return self.replace({v: l for v, l in self.vertices.items() if v not in drop},
                            [e for e in self.edges if e[0] not in drop and e[2] not in drop])

    def induced(self, names: Iterable[str]) -> Graph:
        keep = set(names)
        return self.replace({v: l for v, l in self.vertices.items() if v in keep},
                            [e for e in self.edges if e[0] in keep and e[2] in keep])

    def rename(self, mapping: Mapping[str, str]) -> Graph:
        def f(v: str) -> str:
            return mapping.get(v, v)
        verts = {f(v): l for v, l in self.vertices.items()}
        if len(verts) != len(self.vertices):
            raise GraphError("renaming is not injective")
        return self.replace(verts, [(f(s), l, f(t)) for s, l, t in self.edges])

    def fresh_name(self, base: str, taken: Iterable[str] = ()) -> str:
        taken = set(taken)
        if base not in self.vertices and base not in taken:
            return base
        i = 1
        while f"{base}#{i}" in self.vertices or f"{base}#{i}" in taken:
            i += 1
        return f"{base}#{i}"


def disjoint_union(*graphs: Graph) -> Graph:
    alph = graphs[0].alphabets
    verts: dict[str, str] = {}
    edges: set[Edge] = set()
    for g in graphs:
        alph = alph.union(g.alphabets)
        for v, lab in g.vertices.items():
            if v in verts:
                raise GraphError(f"vertex name {v!r} occurs in more than one graph")
            verts[v] = lab
        edges |= g.edges
    return Graph(alph, verts, frozenset(edges))


# -- string graphs -------------------------------------------------------------


def classify_vertex(g: Graph, v: str) -> VertexKind:
    if v not in g.vertices:
        raise GraphError(f"unknown vertex {v!r}")
    return g.kind(v)


def check_string_graph(g: Graph, allow_encoding: bool = False) -> Report:
    """All violations, in the order: terminal labels, (1), (2), (3), encoding.

    With ``allow_encoding`` the check is for *encoded* string graphs: edges
    with an encoding label may join two node-vertices, and nowhere else.
    """
    out: list[Violation] = []
    for v in g.nonterminals:
        out.append(Violation("terminal", f"{v!r} is a non-terminal", (v,)))
    for e in g.sorted_edges:
        s, lab, t = e
        if g.is_node(s) and g.is_node(t) and not (allow_encoding and g.is_encoding(e)):
            out.append(Violation("1", f"edge {e!r} joins two node-vertices", (e,)))
    for v in g.wire_vertices:
        if len(g.in_edges(v)) > 1:
            out.append(Violation("2", f"wire-vertex {v!r} has in-degree "
                                      f"{len(g.in_edges(v))}", (v,)))
    for v in g.wire_vertices:
        if len(g.out_edges(v)) > 1:
            out.append(Violation("3", f"wire-vertex {v!r} has out-degree "
                                      f"{len(g.out_edges(v))}", (v,)))
    for e in g.sorted_edges:
        if not g.is_encoding(e) or (g.is_node(e[0]) and g.is_node(e[2])):
            # node-node encoding edges are either allowed or already reported under (1)
            continue
        out.append(Violation("encoding", f"encoding edge {e!r} does not join two "
                                         "node-vertices", (e,)))
    return Report(tuple(out))


def is_string_graph(g: Graph) -> Report:
    """Report whose first violation names the first failing condition."""
    return check_string_graph(g)


def _require_string_graph(g: Graph) -> None:
    rep = check_string_graph(g)
    if not rep:
        raise GraphError(f"not a string graph: {rep.first}")


def boundary(g: Graph) -> tuple[frozenset[str], frozenset[str]]:
    """(inputs, outputs) of a string graph."""
    _require_string_graph(g)
    return _boundary(g)


def _boundary(g: Graph) -> tuple[frozenset[str], frozenset[str]]:
    ins = frozenset(v for v in g.wire_vertices if not g.in_edges(v))
    outs = frozenset(v for v in g.wire_vertices if not g.out_edges(v))
    return ins, outs


def boundary_vertices(g: Graph) -> frozenset[str]:
    ins, outs = boundary(g)
    return ins | outs


class WireKind(enum.Enum):
    CIRCLE = "Circle"
    ATTACHED = "Attached"
    BARE = "Bare"


@dataclass(frozen=True)
class Wire:
    kind: WireKind
    path: tuple[str, ...]
    source: Optional[str] = None
    target: Optional[str] = None

    @property
    def endpoints(self) -> tuple[str, ...]:
        return tuple(v for v in (self.source, self.target) if v is not None)

    def __len__(self) -> int:
        return len(self.path)

    @property
    def minimal_length(self) -> int:
        return 1 if self.kind is WireKind.ATTACHED else 2


def _wire_succ(g: Graph, v: str) -> Optional[str]:
    for _, _, t in g.out_edges(v):
        if g.is_wire(t):
            return t
    return None


def _wire_pred(g: Graph, v: str) -> Optional[str]:
    for s, _, _ in g.in_edges(v):
        if g.is_wire(s):
            return s
    return None


def _wires(g: Graph) -> list[Wire]:
    seen: set[str] = set()
    result: list[Wire] = []
    for v in g.wire_vertices:
        if v in seen or not g.incident(v):
            continue
        # walk back to the start of the chain (or around a cycle)
        start = v
        while True:
            p = _wire_pred(g, start)
            if p is None or p == v:
                break
            start = p
        path = [start]
        cur = start
        while True:
            nxt = _wire_succ(g, cur)
            if nxt is None or nxt == start:
                break
            path.append(nxt)
            cur = nxt
        seen.update(path)
        if _wire_pred(g, start) is not None:
            i = path.index(min(path))
            result.append(Wire(WireKind.CIRCLE, tuple(path[i:] + path[:i])))
            continue
        src = next((s for s, _, _ in g.in_edges(path[0]) if g.is_node(s)), None)
        dst = next((t for _, _, t in g.out_edges(path[-1]) if g.is_node(t)), None)
        kind = WireKind.ATTACHED if (src or dst) else WireKind.BARE
        result.append(Wire(kind, tuple(path), src, dst))
    result.sort(key=lambda w: w.path[0])
    return result


def wires(g: Graph) -> list[Wire]:
    """All wires, sorted by first path vertex.  Isolated wire-vertices are not wires."""
    _require_string_graph(g)
    return _wires(g)


def isolated_wire_vertices(g: Graph) -> list[str]:
    return [v for v in g.wire_vertices if not g.incident(v)]


def merge_wire_vertices(g: Graph, u: str, v: str) -> Graph:
    _require_string_graph(g)
    for x in (u, v):
        if x not in g.vertices or not g.is_wire(x):
            raise GraphError(f"{x!r} is not a wire-vertex")
    uv = [e for e in g.out_edges(u) if e[2] == v]
    if not uv:
        raise GraphError(f"no edge {u!r} -> {v!r}")
    if any(e[2] == u for e in g.out_edges(v)):
        raise GraphError("merging a 2-circle would create a self-loop")
    if not g.in_edges(u) and not g.out_edges(v):
        raise GraphError("merging would turn a bare wire into an isolated vertex")
    if g.vertices[u] != g.vertices[v]:
        raise GraphError(f"cannot merge wire-vertices with labels "
                         f"{g.vertices[u]!r} and {g.vertices[v]!r}")
    edges = set(g.edges) - set(g.out_edges(u)) - set(g.incident(v))
    edges.update((u, lab, t) for _, lab, t in g.out_edges(v))
    verts = {x: l for x, l in g.vertices.items() if x != v}
    return g.replace(verts, edges)


def _insert(g: Graph, v: str, count: int, before: bool = False) -> tuple[Graph, list[str]]:
    """Insert ``count`` wire-vertices right after (or before) ``v`` on its wire."""
    ins, outs = g.in_edges(v), g.out_edges(v)
    if ins:
        inner = ins[0][1]
    elif outs:
        inner = outs[0][1]
    else:
        raise GraphError(f"{v!r} is isolated and belongs to no wire")
    new: list[str] = []
    for i in range(1, count + 1):
        new.append(g.fresh_name(f"{v}~{i}", new))
    verts = dict(g.vertices)
    for n in new:
        verts[n] = g.vertices[v]
    if before:
        edges = set(g.edges) - set(ins)
        chain = new + [v]
        edges.update((s, lab, new[0]) for s, lab, _ in ins)
    else:
        edges = set(g.edges) - set(outs)
        chain = [v] + new
        edges.update((new[-1], lab, t) for _, lab, t in outs)
    edges.update((a, inner, b) for a, b in zip(chain, chain[1:]))
    return g.replace(verts, edges), new


def grow_wire_vertex(g: Graph, v: str, count: int) -> Graph:
    """Add ``count`` copies of wire-vertex ``v`` next to it on its wire.

    Copies go after ``v`` unless ``v`` is an output, so boundary names stay put.
    """
    if count <= 0:
        return g
    return _insert(g, v, count, before=not g.out_edges(v))[0]


def split_wire_vertex(g: Graph, v: str) -> Graph:
    """Split ``v`` into ``v -> v~1``; the in-edge stays on ``v``."""
    _require_string_graph(g)
    if v not in g.vertices or not g.is_wire(v):
        raise GraphError(f"{v!r} is not a wire-vertex")
    return _insert(g, v, 1)[0]


def stretch_wire(g: Graph, wire: Wire, length: int) -> tuple[Graph, tuple[str, ...]]:
    """Lengthen ``wire`` to ``length`` vertices; returns the graph and new path.

    New vertices go right after the first vertex of the path, except on a
    one-vertex wire ending in an output, where they go before it.  Either way
    inputs and outputs keep their names.
    """
    extra = length - len(wire.path)
    if extra < 0:
        raise GraphError("stretch_wire cannot shorten a wire")
    if extra == 0:
        return g, wire.path
    p0 = wire.path[0]
    if len(wire.path) == 1 and not g.out_edges(p0):
        g2, new = _insert(g, p0, extra, before=True)
        return g2, tuple(new) + (p0,)
    g2, new = _insert(g, p0, extra)
    return g2, (p0,) + tuple(new) + wire.path[1:]


def _contract_runs(path: tuple[str, ...], labels: Mapping[str, str],
                   cyclic: bool) -> list[list[str]]:
    runs: list[list[str]] = []
    for v in path:
        if runs and labels[runs[-1][-1]] == labels[v]:
            runs[-1].append(v)
        else:
            runs.append([v])
    if cyclic and len(runs) > 1 and labels[runs[0][0]] == labels[runs[-1][-1]]:
        runs[0] = runs.pop() + runs[0]
    return runs


def minimal_representative(g: Graph) -> Graph:
    """Contract every wire as far as merging allows.

    Attached wires shrink to one vertex per run of equally-labelled
    wire-vertices; circles and bare wires keep at least two vertices.  Each
    contracted run keeps the name of its first vertex, except that a run
    ending in an output keeps the output's name, so inputs and outputs are
    never renamed.
    """
    _require_string_graph(g)
    verts = dict(g.vertices)
    edges = set(g.edges)
    for w in _wires(g):
        cyclic = w.kind is WireKind.CIRCLE
        runs = _contract_runs(w.path, g.vertices, cyclic)
        if w.kind is not WireKind.ATTACHED and len(runs) == 1:
            run = runs[0]
            runs = [run[:1], run[1:]]
        if all(len(r) == 1 for r in runs):
            continue
        for v in w.path:
            edges -= set(g.incident(v))
            del verts[v]
        reps = [r[0] for r in runs]
        if not cyclic and not g.out_edges(w.path[-1]):
            reps[-1] = runs[-1][-1]     # keep the output's name
        for r in reps:
            verts[r] = g.vertices[r]
        for i in range(len(runs) - 1):
            lab = g.out_edges(runs[i][-1])[0][1]
            edges.add((reps[i], lab, reps[i + 1]))
        if cyclic:
            lab = g.out_edges(runs[-1][-1])[0][1]
            edges.add((reps[-1], lab, reps[0]))
        else:
            for s, lab, _ in g.in_edges(w.path[0]):
                edges.add((s, lab, reps[0]))
            for _, lab, t in g.out_edges(w.path[-1]):
                edges.add((reps[-1], lab, t))
    return g.replace(verts, edges)


def is_minimal(g: Graph) -> bool:
    return minimal_representative(g) == g


# -- isomorphism ---------------------------------------------------------------


def _digest(obj: object) -> str:
    return hashlib.blake2b(repr(obj).encode(), digest_size=12).hexdigest()


def _refine(g: Graph, rounds: Optional[int] = None) -> dict[str, str]:
    """Weisfeiler-Leman colours; comparable across graphs."""
    colour = {v: _digest(("v", lab)) for v, lab in g.vertices.items()}
    n_classes = len(set(colour.values()))
    for _ in range(rounds if rounds is not None else len(g.vertices)):
        new = {}
        for v in g.vertices:
            sig = sorted([("o", lab, colour[t]) for _, lab, t in g.out_edges(v)]
                         + [("i", lab, colour[s]) for s, lab, _ in g.in_edges(v)])
            new[v] = _digest((colour[v], sig))
        colour = new
        k = len(set(colour.values()))
        if k == n_classes:
            break
        n_classes = k
    return colour


def graph_hash(g: Graph) -> str:
    """Isomorphism invariant (equal for isomorphic graphs)."""
    colour = _refine(g)
    return _digest((sorted(colour.values()), len(g.edges)))


def graph_isomorphic(g: Graph, h: Graph) -> Optional[dict[str, str]]:
    """A label- and edge-preserving bijection g -> h, or None."""
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    if not g.vertices:
        return {}
    cg, ch = _refine(g), _refine(h)
    classes_g: dict[str, list[str]] = defaultdict(list)
    classes_h: dict[str, list[str]] = defaultdict(list)
    for v, c in cg.items():
        classes_g[c].append(v)
    for v, c in ch.items():
        classes_h[c].append(v)
    if {c: len(vs) for c, vs in classes_g.items()} != {c: len(vs) for c, vs in classes_h.items()}:
        return None
    # smallest colour classes first, then stay connected to what is mapped
    order: list[str] = []
    placed: set[str] = set()
    remaining = sorted(g.vertices, key=lambda v: (len(classes_g[cg[v]]), v))
    while remaining:
        frontier = [v for v in remaining if g.neighbours(v) & placed]
        v = frontier[0] if frontier else remaining[0]
        order.append(v)
        placed.add(v)
        remaining.remove(v)
    g_out = {v: {(lab, t) for _, lab, t in g.out_edges(v)} for v in g.vertices}
    h_out = {v: {(lab, t) for _, lab, t in h.out_edges(v)} for v in h.vertices}
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(v: str, w: str) -> bool:
        for lab, t in g_out[v]:
            if t in mapping and (lab, mapping[t]) not in h_out[w]:
                return False
        for s, lab, _ in g.in_edges(v):
            if s in mapping and (lab, w) not in h_out[mapping[s]]:
                return False
        inverse = {b: a for a, b in mapping.items()}
        for lab, t in h_out[w]:
            if t in inverse and (lab, inverse[t]) not in g_out[v]:
                return False
        for s, lab, _ in h.in_edges(w):
            if s in inverse and (lab, v) not in g_out[inverse[s]]:
                return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in sorted(classes_h[cg[v]]):
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if search(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return dict(mapping) if search(0) else None


def wire_homeomorphic(g: Graph, h: Graph) -> bool:
    return graph_isomorphic(minimal_representative(g), minimal_representative(h)) is not None


class IsoIndex:
    """Set of graphs up to isomorphism, bucketed by :func:`graph_hash`."""

    def __init__(self) -> None:
        self._buckets: dict[str, list[tuple[Graph, object]]] = defaultdict(list)
        self._count = 0

    def find(self, g: Graph) -> Optional[tuple[Graph, object]]:
        for entry in self._buckets[graph_hash(g)]:
            if graph_isomorphic(g, entry[0]) is not None:
                return entry
        return None

    def add(self, g: Graph, payload: object = None) -> bool:
        """Insert ``g``; False if an isomorphic graph was already present."""
        key = graph_hash(g)
        for other, _ in self._buckets[key]:
            if graph_isomorphic(g, other) is not None:
                return False
        self._buckets[key].append((g, payload))
        self._count += 1
        return True

    def __len__(self) -> int:
        return self._count

    def __iter__(self) -> Iterator[tuple[Graph, object]]:
        for bucket in self._buckets.values():
            yield from bucket
