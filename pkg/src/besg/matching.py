"""Matchings of string graphs modulo wire-homeomorphism.

Target wires are elastic: instead of guessing how far to stretch each wire of
the target, we decide where the pattern's wire chains sit on each target wire
(anchored at node-vertices, or floating with a gap or no gap between
neighbours), then stretch the minimal representative of the target to exactly
the required lengths.  Every run of unmatched wire-vertices in that stretched
graph has length one, so each matching returned is the canonical member of
its wire-sliding class.

The class key of a matching records the node-vertex assignment and, for each
touched wire of the minimal target, the sequence of pattern vertices along it
with runs of unmatched vertices collapsed to a single gap token.  Circles are
read up to rotation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .graph import (Graph, GraphError, Wire, WireKind, _boundary, _require_string_graph,
                    _wires, isolated_wire_vertices, minimal_representative,
                    stretch_wire)

GAP = (0, "")


@dataclass(frozen=True)
class Matching:
    expanded_target: Graph
    map: Mapping[str, str]
    pattern_boundary: frozenset[str]
    key: tuple = ()

    def image(self) -> set[str]:
        return set(self.map.values())


def check_matching(l: Graph, target: Graph, vmap: Mapping[str, str],
                   pattern_boundary: Optional[Iterable[str]] = None) -> Optional[str]:
    """None if ``vmap`` is a matching of ``l`` into ``target``, else the reason.

    Besides being an injective label- and edge-preserving map, every edge of
    the target that touches the image of a non-boundary vertex must itself be
    the image of an edge of ``l`` (no dangling edges after deletion).
    """
    if set(vmap) != set(l.vertices):
        return "map is not total on the pattern"
    if len(set(vmap.values())) != len(vmap):
        return "map is not injective"
    for v, w in vmap.items():
        if w not in target.vertices:
            return f"{w!r} is not a vertex of the target"
        if l.vertices[v] != target.vertices[w]:
            return f"label mismatch at {v!r}"
    image_edges = set()
    for s, lab, t in l.edges:
        e = (vmap[s], lab, vmap[t])
        if e not in target.edges:
            return f"edge {(s, lab, t)!r} is not preserved"
        image_edges.add(e)
    if pattern_boundary is None:
        ins, outs = _boundary(l)
        pattern_boundary = ins | outs
    inner = {vmap[v] for v in l.vertices if v not in set(pattern_boundary)}
    for w in inner:
        for e in target.incident(w):
            if e not in image_edges:
                return f"edge {e!r} dangles at the image of an interior vertex"
    return None


def is_matching(l: Graph, target: Graph, vmap: Mapping[str, str]) -> bool:
    return check_matching(l, target, vmap) is None


def wire_tokens(positions: Sequence[Optional[str]], cyclic: bool) -> tuple:
    """Collapse runs of unmatched positions; circles are read up to rotation."""
    pos = list(positions)
    if cyclic:
        first = next((i for i, p in enumerate(pos) if p is not None), None)
        if first is None:
            return (GAP,)
        pos = pos[first:] + pos[:first]
    tokens: list[tuple] = []
    for p in pos:
        if p is None:
            if not tokens or tokens[-1] != GAP:
                tokens.append(GAP)
        else:
            tokens.append((1, p))
    if cyclic:
        return min(tuple(tokens[i:] + tokens[:i]) for i in range(len(tokens)))
    return tuple(tokens)


def class_key(node_map: Mapping[str, str],
              wire_positions: Mapping[int, tuple[Sequence[Optional[str]], bool]]) -> tuple:
    """Canonical key of a matching class.

    ``wire_positions`` maps the index of a wire (or isolated wire-vertex slot)
    of the minimal target to the pattern vertex at each position of its
    stretched copy, and whether it is a circle.  Untouched wires are omitted.
    """
    wires_part = []
    for idx in sorted(wire_positions):
        positions, cyclic = wire_positions[idx]
        if any(p is not None for p in positions):
            wires_part.append((idx, wire_tokens(positions, cyclic)))
    return (tuple(sorted(node_map.items())), tuple(wires_part))


def target_slots(h0: Graph) -> tuple[list[Wire], list[str]]:
    """Wires and isolated wire-vertices of a minimal graph, in key order."""
    return _wires(h0), isolated_wire_vertices(h0)


@dataclass
class _Chain:
    path: tuple[str, ...]
    circle: bool
    head: Optional[str]          # node-vertex with an edge into path[0]
    tail: Optional[str]          # node-vertex receiving an edge from path[-1]
    head_label: Optional[str]
    tail_label: Optional[str]
    label: Optional[str]         # common vertex label, None if mixed

    @property
    def free(self) -> bool:
        return not self.circle and self.head is None and self.tail is None


def _chains(l: Graph) -> list[_Chain]:
    out = []
    for w in _wires(l):
        labels = {l.vertices[v] for v in w.path}
        label = labels.pop() if len(labels) == 1 else None
        if w.kind is WireKind.CIRCLE:
            out.append(_Chain(w.path, True, None, None, None, None, label))
            continue
        hl = next((lab for s, lab, _ in l.in_edges(w.path[0]) if s == w.source), None)
        tl = next((lab for _, lab, t in l.out_edges(w.path[-1]) if t == w.target), None)
        out.append(_Chain(w.path, False, w.source, w.target, hl, tl, label))
    for v in isolated_wire_vertices(l):
        out.append(_Chain((v,), False, None, None, None, None, l.vertices[v]))
    return out


def _edge_signature(g: Graph, v: str) -> tuple:
    return (tuple(sorted(lab for _, lab, _ in g.out_edges(v))),
            tuple(sorted(lab for _, lab, _ in g.in_edges(v))))


def _node_maps(l: Graph, h0: Graph) -> Iterator[dict[str, str]]:
    nodes = sorted(l.node_vertices, key=lambda v: (-l.degree(v), v))
    cands = {v: [w for w in h0.node_vertices
                 if h0.vertices[w] == l.vertices[v]
                 and _edge_signature(h0, w) == _edge_signature(l, v)]
             for v in nodes}
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def rec(i: int) -> Iterator[dict[str, str]]:
        if i == len(nodes):
            yield dict(mapping)
            return
        v = nodes[i]
        for w in cands[v]:
            if w in used:
                continue
            mapping[v] = w
            used.add(w)
            yield from rec(i + 1)
            used.discard(w)
            del mapping[v]

    return rec(0)


def _wire_label(h0: Graph, w: Wire) -> str:
    labels = {h0.vertices[v] for v in w.path}
    if len(labels) != 1:
        raise GraphError(f"wire {w.path!r} mixes wire-vertex labels; matching "
                         "requires each wire to carry a single label")
    return labels.pop()


def _edge_label(g: Graph, s: str, t: str) -> Optional[str]:
    return next((lab for _, lab, x in g.out_edges(s) if x == t), None)


def _anchor_assignments(chains: list[_Chain], tw: list[Wire], h0: Graph,
                        wl: list[str], nmap: Mapping[str, str]
                        ) -> Iterator[tuple[dict[int, int], dict[int, int]]]:
    """Yield (src_owner, dst_owner): target wire index -> chain index."""
    anchors = [(ci, end) for ci, c in enumerate(chains)
               for end in ("head", "tail") if getattr(c, end) is not None]
    src: dict[int, int] = {}
    dst: dict[int, int] = {}
    chosen: dict[int, int] = {}

    def fits(ci: int, end: str, ti: int) -> bool:
        c, t = chains[ci], tw[ti]
        if c.label != wl[ti]:
            return False
        if end == "head":
            if ti in src or t.source != nmap[c.head]:
                return False
            if _edge_label(h0, t.source, t.path[0]) != c.head_label:
                return False
        else:
            if ti in dst or t.target != nmap[c.tail]:
                return False
            if _edge_label(h0, t.path[-1], t.target) != c.tail_label:
                return False
        # a chain anchored at both ends spans exactly one whole wire
        other = "tail" if end == "head" else "head"
        if getattr(c, other) is not None and ci in chosen and chosen[ci] != ti:
            return False
        return True

    def rec(i: int) -> Iterator[tuple[dict[int, int], dict[int, int]]]:
        if i == len(anchors):
            yield dict(src), dict(dst)
            return
        ci, end = anchors[i]
        for ti in range(len(tw)):
            if not fits(ci, end, ti):
                continue
            table = src if end == "head" else dst
            table[ti] = ci
            fresh = ci not in chosen
            chosen[ci] = ti
            yield from rec(i + 1)
            if fresh:
                del chosen[ci]
            del table[ti]

    return rec(0)


def _linear_arrangements(first: Optional[_Chain], last: Optional[_Chain],
                         floating: list[_Chain], min_len: int
                         ) -> Iterator[list[Optional[str]]]:
    if first is not None and first is last:
        if not floating:
            yield list(first.path)
        return
    for perm in itertools.permutations(floating):
        items = ([first] if first else []) + list(perm) + ([last] if last else [])
        if not items:
            return
        n_slots = len(items) + 1
        for gaps in itertools.product((0, 1), repeat=n_slots):
            if first is not None and gaps[0]:
                continue
            if last is not None and gaps[-1]:
                continue
            pos: list[Optional[str]] = [None] * gaps[0]
            for item, g in zip(items, gaps[1:]):
                pos.extend(item.path)
                pos.extend([None] * g)
            if len(pos) >= min_len:
                yield pos


def _circle_arrangements(floating: list[_Chain]) -> Iterator[list[Optional[str]]]:
    head, rest = floating[0], floating[1:]
    for perm in itertools.permutations(rest):
        items = [head] + list(perm)
        for gaps in itertools.product((0, 1), repeat=len(items)):
            pos: list[Optional[str]] = []
            for item, g in zip(items, gaps):
                pos.extend(item.path)
                pos.extend([None] * g)
            if len(pos) >= 2:
                yield pos


def _floating_assignments(free: list[int], circles: list[int], chains: list[_Chain],
                          tw: list[Wire], wl: list[str], points: list[str], h0: Graph,
                          blocked: set[int]) -> Iterator[tuple[dict[int, int], dict[int, list[int]], dict[int, int]]]:
    """Yield (circle_host, wire_guests, point_guest) assignments."""
    circle_targets = [ti for ti, t in enumerate(tw) if t.kind is WireKind.CIRCLE]
    circle_host: dict[int, int] = {}
    guests: dict[int, list[int]] = {}
    point_guest: dict[int, int] = {}

    def rec_circles(i: int) -> Iterator:
        if i == len(circles):
            yield from rec_free(0)
            return
        ci = circles[i]
        for ti in circle_targets:
            if ti in circle_host.values() or chains[ci].label != wl[ti]:
                continue
            if len(chains[ci].path) < 2:
                continue
            circle_host[ci] = ti
            yield from rec_circles(i + 1)
            del circle_host[ci]

    def rec_free(j: int) -> Iterator:
        if j == len(free):
            yield dict(circle_host), {k: list(v) for k, v in guests.items()}, dict(point_guest)
            return
        ci = free[j]
        c = chains[ci]
        hosted = set(circle_host.values())
        for ti in range(len(tw)):
            if ti in blocked or ti in hosted or c.label != wl[ti]:
                continue
            guests.setdefault(ti, []).append(ci)
            yield from rec_free(j + 1)
            guests[ti].pop()
            if not guests[ti]:
                del guests[ti]
        if len(c.path) == 1:
            for pi, p in enumerate(points):
                if pi in point_guest or h0.vertices[p] != c.label:
                    continue
                point_guest[pi] = ci
                yield from rec_free(j + 1)
                del point_guest[pi]

    return rec_circles(0) if circles else rec_free(0)


def find_matchings(l: Graph, h: Graph) -> list[Matching]:
    """All matching classes of ``l`` into graphs wire-homeomorphic to ``h``.

    Results are sorted by class key; each carries its own stretched target.
    """
    _require_string_graph(l)
    _require_string_graph(h)
    h0 = minimal_representative(h)
    tw, points = target_slots(h0)
    wl = [_wire_label(h0, t) for t in tw]
    chains = _chains(l)
    if any(c.label is None for c in chains):
        return []
    ins, outs = _boundary(l)
    lb = ins | outs
    found: dict[tuple, Matching] = {}

    for nmap in _node_maps(l, h0):
        image_nodes = set(nmap.values())
        for src, dst in _anchor_assignments(chains, tw, h0, wl, nmap):
            if any(t.source in image_nodes and ti not in src for ti, t in enumerate(tw)):
                continue
            if any(t.target in image_nodes and ti not in dst for ti, t in enumerate(tw)):
                continue
            anchored = set(src.values()) | set(dst.values())
            free = [ci for ci, c in enumerate(chains) if c.free]
            circles = [ci for ci, c in enumerate(chains) if c.circle]
            assert anchored | set(free) | set(circles) == set(range(len(chains)))
            full = {ti for ti in src if dst.get(ti) == src[ti]}
            for circle_host, guests, point_guest in _floating_assignments(
                    free, circles, chains, tw, wl, points, h0, full):
                per_wire: list[list[list[Optional[str]]]] = []
                touched: list[int] = []
                for ti, t in enumerate(tw):
                    first = chains[src[ti]] if ti in src else None
                    last = chains[dst[ti]] if ti in dst else None
                    floating = [chains[ci] for ci in guests.get(ti, [])]
                    host = [ci for ci, x in circle_host.items() if x == ti]
                    if host:
                        options = [list(chains[host[0]].path)]
                    elif t.kind is WireKind.CIRCLE:
                        options = list(_circle_arrangements(floating)) if floating else []
                    else:
                        options = list(_linear_arrangements(first, last, floating,
                                                            t.minimal_length))
                    if not options:
                        if first or last or floating or host:
                            break
                        continue
                    touched.append(ti)
                    per_wire.append(options)
                else:
                    for combo in itertools.product(*per_wire):
                        m = _realize(l, h0, tw, points, nmap, dict(zip(touched, combo)),
                                     point_guest, chains, lb)
                        if m is not None and m.key not in found:
                            found[m.key] = m
    return [found[k] for k in sorted(found)]


def _realize(l: Graph, h0: Graph, tw: list[Wire], points: list[str],
             nmap: Mapping[str, str], layout: Mapping[int, list[Optional[str]]],
             point_guest: Mapping[int, int], chains: list[_Chain],
             lb: frozenset[str]) -> Optional[Matching]:
    g = h0
    vmap = dict(nmap)
    positions: dict[int, tuple[list[Optional[str]], bool]] = {}
    for ti in sorted(layout):
        pos = layout[ti]
        g, path = stretch_wire(g, tw[ti], len(pos))
        for p, v in zip(pos, path):
            if p is not None:
                vmap[p] = v
        positions[ti] = (pos, tw[ti].kind is WireKind.CIRCLE)
    for pi, ci in point_guest.items():
        vmap[chains[ci].path[0]] = points[pi]
        positions[len(tw) + pi] = ([chains[ci].path[0]], False)
    if check_matching(l, g, vmap, lb) is not None:
        return None
    return Matching(g, vmap, lb, class_key(nmap, positions))


def find_embeddings(l: Graph, target: Graph,
                    pattern_boundary: Iterable[str] = ()) -> list[dict[str, str]]:
    """Exact occurrences of ``l`` in ``target`` (no wire stretching).

    Vertices outside ``pattern_boundary`` must have all their target edges
    inside the occurrence.  Unlike :func:`find_matchings` neither graph has to
    be a string graph.
    """
    bnd = frozenset(pattern_boundary)
    order: list[str] = []
    remaining = sorted(l.vertices, key=lambda v: (v in bnd, v))
    while remaining:
        nxt = next((v for v in remaining if l.neighbours(v) & set(order)), remaining[0])
        order.append(nxt)
        remaining.remove(nxt)
    l_out = {v: {(lab, t) for _, lab, t in l.out_edges(v)} for v in l.vertices}
    l_in = {v: {(lab, s) for s, lab, _ in l.in_edges(v)} for v in l.vertices}
    t_out = {v: {(lab, t) for _, lab, t in target.out_edges(v)} for v in target.vertices}
    by_label: dict[str, list[str]] = {}
    for v, lab in target.vertices.items():
        by_label.setdefault(lab, []).append(v)
    vmap: dict[str, str] = {}
    used: set[str] = set()
    found: list[dict[str, str]] = []

    def fits(v: str, w: str) -> bool:
        if v in bnd:
            if target.degree(w) < l.degree(v):
                return False
        elif target.degree(w) != l.degree(v):
            return False
        for lab, t in l_out[v]:
            if t in vmap and (lab, vmap[t]) not in t_out[w]:
                return False
        for lab, s in l_in[v]:
            if s in vmap and (lab, w) not in t_out[vmap[s]]:
                return False
        return True

    def rec(i: int) -> None:
        if i == len(order):
            if check_matching(l, target, vmap, bnd) is None:
                found.append(dict(vmap))
            return
        v = order[i]
        placed = [u for u in l.neighbours(v) if u in vmap]
        if placed:
            cands = sorted(target.neighbours(vmap[placed[0]]))
        else:
            cands = by_label.get(l.vertices[v], [])
        for w in cands:
            if w in used or target.vertices[w] != l.vertices[v] or not fits(v, w):
                continue
            vmap[v] = w
            used.add(w)
            rec(i + 1)
            del vmap[v]
            used.discard(w)

    rec(0)
    return found
