"""JSON documents and DOT rendering.

Every document is an object with ``format_version`` and ``kind``.  Graph-like
parts (a graph, a production body, a decoding rule's rhs) are written as
``{"vertices": {name: label}, "edges": [[source, label, target], ...]}`` and
share the ``alphabets`` given once at the top of the document.  Unknown
fields are rejected.  Output is deterministic: keys sorted, edges sorted.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .besg import BESG, DecodeRule, DecodingSystem
from .dpo import RuleSpan
from .grammar import ConnectionInstruction, DerivationTrace, Grammar, Production
from .graph import Alphabets, Graph, GraphError
from .pattern import RewritePattern

FORMAT_VERSION = 1
KINDS = ("graph", "grammar", "rule", "pattern", "trace")


class FormatError(GraphError):
    """A document does not follow its schema."""


def _expect(obj: Any, typ: type, where: str) -> Any:
    if not isinstance(obj, typ):
        raise FormatError(f"{where}: expected {typ.__name__}, got {type(obj).__name__}")
    return obj


def _fields(obj: Mapping, where: str, required: set[str], optional: set[str] = set()) -> None:
    _expect(obj, dict, where)
    missing = required - obj.keys()
    if missing:
        raise FormatError(f"{where}: missing field(s) {sorted(missing)}")
    extra = obj.keys() - required - optional
    if extra:
        raise FormatError(f"{where}: unknown field(s) {sorted(extra)}")


def _strings(obj: Any, where: str) -> list[str]:
    _expect(obj, list, where)
    for x in obj:
        _expect(x, str, where)
    return obj


# -- alphabets and graphs ------------------------------------------------------

_ALPHABET_FIELDS = {"node_labels", "wire_labels", "nonterminal_labels", "edge_labels",
                    "encoding_labels"}


def alphabets_to_json(a: Alphabets) -> dict:
    return {k: sorted(getattr(a, k)) for k in sorted(_ALPHABET_FIELDS)}


def alphabets_from_json(obj: Any, where: str = "alphabets") -> Alphabets:
    _fields(obj, where, {"node_labels", "wire_labels"},
            {"nonterminal_labels", "edge_labels", "encoding_labels"})
    kw = {k: _strings(obj.get(k, []), f"{where}.{k}") for k in _ALPHABET_FIELDS}
    return Alphabets(**kw)


def body_to_json(g: Graph) -> dict:
    return {"vertices": dict(g.vertices), "edges": [list(e) for e in g.sorted_edges]}


def body_from_json(obj: Any, alph: Alphabets, where: str) -> Graph:
    _fields(obj, where, {"vertices", "edges"})
    verts = _expect(obj["vertices"], dict, f"{where}.vertices")
    for v, lab in verts.items():
        _expect(lab, str, f"{where}.vertices[{v!r}]")
    edges = []
    for i, e in enumerate(_expect(obj["edges"], list, f"{where}.edges")):
        if len(_strings(e, f"{where}.edges[{i}]")) != 3:
            raise FormatError(f"{where}.edges[{i}]: expected [source, label, target]")
        edges.append(tuple(e))
    try:
        return Graph(alph, verts, frozenset(edges))
    except GraphError as exc:
        raise FormatError(f"{where}: {exc}") from exc


def _header(kind: str) -> dict:
    return {"format_version": FORMAT_VERSION, "kind": kind}


def _check_header(obj: Any, kind: str) -> None:
    _expect(obj, dict, "document")
    if obj.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"document: unsupported format_version {obj.get('format_version')!r}")
    if obj.get("kind") != kind:
        raise FormatError(f"document: expected kind {kind!r}, got {obj.get('kind')!r}")


def graph_to_json(g: Graph) -> dict:
    doc = _header("graph")
    doc["alphabets"] = alphabets_to_json(g.alphabets)
    doc.update(body_to_json(g))
    return doc


def graph_from_json(obj: Any) -> Graph:
    _check_header(obj, "graph")
    _fields(obj, "graph", {"format_version", "kind", "alphabets", "vertices", "edges"})
    alph = alphabets_from_json(obj["alphabets"])
    return body_from_json({"vertices": obj["vertices"], "edges": obj["edges"]}, alph, "graph")


# -- grammars ------------------------------------------------------------------


def _productions_to_json(g: Grammar) -> dict:
    out = {}
    for name, p in g.productions.items():
        out[name] = {"head": p.head, "body": body_to_json(p.body),
                     "connections": [list(c.as_tuple()) for c in p.sorted_connections]}
    return out


def _productions_from_json(obj: Any, alph: Alphabets, where: str) -> list[Production]:
    prods = []
    for name, po in sorted(_expect(obj, dict, where).items()):
        w = f"{where}.{name}"
        _fields(po, w, {"head", "body"}, {"connections"})
        conns = []
        for i, c in enumerate(_expect(po.get("connections", []), list, f"{w}.connections")):
            if len(_strings(c, f"{w}.connections[{i}]")) != 5:
                raise FormatError(f"{w}.connections[{i}]: expected "
                                  "[neighbour, old, new, target, direction]")
            conns.append(ConnectionInstruction(*c))
        body = body_from_json(po["body"], alph, f"{w}.body")
        prods.append(Production(name, _expect(po["head"], str, f"{w}.head"), body, conns))
    return prods


def decoder_to_json(t: DecodingSystem) -> list:
    return [{"alpha": r.alpha, "n1": r.n1, "n2": r.n2, "left": r.left, "right": r.right,
             "rhs": body_to_json(r.rhs)} for r in t]


def decoder_from_json(obj: Any, alph: Alphabets, where: str = "decoder") -> DecodingSystem:
    rules = []
    for i, ro in enumerate(_expect(obj, list, where)):
        w = f"{where}[{i}]"
        _fields(ro, w, {"alpha", "n1", "n2", "left", "right", "rhs"})
        rhs = body_from_json(ro["rhs"], alph, f"{w}.rhs")
        rules.append(DecodeRule(ro["alpha"], ro["n1"], ro["n2"], rhs, ro["left"], ro["right"]))
    return DecodingSystem(rules)


def grammar_to_json(b: BESG) -> dict:
    doc = _header("grammar")
    doc["alphabets"] = alphabets_to_json(b.alphabets)
    doc["start"] = b.grammar.start
    doc["productions"] = _productions_to_json(b.grammar)
    doc["decoder"] = decoder_to_json(b.decoder)
    return doc


def grammar_from_json(obj: Any) -> BESG:
    _check_header(obj, "grammar")
    _fields(obj, "grammar", {"format_version", "kind", "alphabets", "productions", "decoder"},
            {"start"})
    alph = alphabets_from_json(obj["alphabets"])
    start = _expect(obj.get("start", "S"), str, "grammar.start")
    try:
        g = Grammar(alph, _productions_from_json(obj["productions"], alph, "productions"), start)
        return BESG(g, decoder_from_json(obj["decoder"], alph))
    except FormatError:
        raise
    except GraphError as exc:
        raise FormatError(f"grammar: {exc}") from exc


# -- rules, patterns, traces ---------------------------------------------------


def rule_to_json(r: RuleSpan) -> dict:
    doc = _header("rule")
    doc["name"] = r.name
    doc["alphabets"] = alphabets_to_json(r.lhs.alphabets.union(r.rhs.alphabets))
    doc["lhs"] = body_to_json(r.lhs)
    doc["rhs"] = body_to_json(r.rhs)
    return doc


def rule_from_json(obj: Any) -> RuleSpan:
    _check_header(obj, "rule")
    _fields(obj, "rule", {"format_version", "kind", "alphabets", "lhs", "rhs"}, {"name"})
    alph = alphabets_from_json(obj["alphabets"])
    return RuleSpan(body_from_json(obj["lhs"], alph, "lhs"),
                    body_from_json(obj["rhs"], alph, "rhs"),
                    _expect(obj.get("name", "rule"), str, "rule.name"))


def pattern_to_json(p: RewritePattern) -> dict:
    doc = _header("pattern")
    doc["alphabets"] = alphabets_to_json(p.b1.alphabets)
    doc["start"] = p.b1.grammar.start
    doc["decoder"] = decoder_to_json(p.b1.decoder)
    doc["grammar1"] = _productions_to_json(p.b1.grammar)
    doc["grammar2"] = _productions_to_json(p.b2.grammar)
    return doc


def pattern_from_json(obj: Any) -> RewritePattern:
    _check_header(obj, "pattern")
    _fields(obj, "pattern", {"format_version", "kind", "alphabets", "decoder", "grammar1",
                             "grammar2"}, {"start"})
    alph = alphabets_from_json(obj["alphabets"])
    start = _expect(obj.get("start", "S"), str, "pattern.start")
    try:
        t = decoder_from_json(obj["decoder"], alph)
        g1 = Grammar(alph, _productions_from_json(obj["grammar1"], alph, "grammar1"), start)
        g2 = Grammar(alph, _productions_from_json(obj["grammar2"], alph, "grammar2"), start)
    except FormatError:
        raise
    except GraphError as exc:
        raise FormatError(f"pattern: {exc}") from exc
    return RewritePattern(BESG(g1, t), BESG(g2, t))


def trace_to_json(t: DerivationTrace) -> dict:
    doc = _header("trace")
    doc["steps"] = [list(s) for s in t.steps]
    return doc


def trace_from_json(obj: Any) -> DerivationTrace:
    _check_header(obj, "trace")
    _fields(obj, "trace", {"format_version", "kind", "steps"})
    steps = []
    for i, s in enumerate(_expect(obj["steps"], list, "trace.steps")):
        if len(_strings(s, f"trace.steps[{i}]")) != 2:
            raise FormatError(f"trace.steps[{i}]: expected [vertex, production]")
        steps.append(tuple(s))
    return DerivationTrace(tuple(steps))


_READERS = {"graph": graph_from_json, "grammar": grammar_from_json, "rule": rule_from_json,
            "pattern": pattern_from_json, "trace": trace_from_json}


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def from_json(obj: Any, kind: str) -> Any:
    """Read a parsed document of the given kind."""
    if kind not in _READERS:
        raise FormatError(f"unknown document kind {kind!r}")
    return _READERS[kind](obj)


def load(path: str, kind: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc.msg} (line {exc.lineno})") from exc
    return from_json(obj, kind)


def save(path: str, doc: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


# -- DOT -----------------------------------------------------------------------


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Graph, name: str = "G") -> str:
    """Wire-vertices as points, node-vertices as labelled circles, non-terminals
    as boxes, encoding edges dashed."""
    lines = [f"digraph {_q(name)} {{"]
    for v, lab in g.vertices.items():
        if g.is_wire(v):
            attrs = f'shape=point, xlabel={_q(v)}, tooltip={_q(lab)}'
        elif g.is_node(v):
            attrs = f'shape=circle, label={_q(lab)}, tooltip={_q(v)}'
        else:
            attrs = f'shape=box, label={_q(lab)}, tooltip={_q(v)}'
        lines.append(f"  {_q(v)} [{attrs}];")
    for s, lab, t in g.sorted_edges:
        style = ", style=dashed" if lab in g.alphabets.encoding_labels else ""
        lines.append(f"  {_q(s)} -> {_q(t)} [label={_q(lab)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
