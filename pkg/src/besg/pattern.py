"""B-ESG rewrite patterns: two grammars whose productions correspond by name.

Replaying the same derivation trace in both grammars yields a string graph
rewrite rule.  Boundary vertices end up with the same hierarchical names on
both sides, which is exactly the shared-name boundary a :class:`RuleSpan`
expects.
"""

from __future__ import annotations

from dataclasses import dataclass

from .besg import BESG, concrete_derive, validate_besg
from .dpo import RuleSpan, validate_rule
from .grammar import DerivationTrace, GrammarError, derive_steps
from .graph import GraphError, Report, Violation, _boundary


class PatternError(GraphError):
    pass


@dataclass(frozen=True)
class RewritePattern:
    b1: BESG
    b2: BESG

    @property
    def production_pairs(self) -> list[tuple[str, str]]:
        names = sorted(set(self.b1.grammar.productions) & set(self.b2.grammar.productions))
        return [(n, n) for n in names]


def _body_io(body) -> tuple[dict[str, str], dict[str, str]]:
    ins, outs = set(), set()
    for v in body.wire_vertices:
        if not body.in_edges(v):
            ins.add(v)
        if not body.out_edges(v):
            outs.add(v)
    return ({v: body.vertices[v] for v in ins}, {v: body.vertices[v] for v in outs})


def validate_pattern(p: RewritePattern) -> Report:
    out: list[Violation] = []
    for tag, b in (("grammar1", p.b1), ("grammar2", p.b2)):
        for v in validate_besg(b).violations:
            out.append(Violation(tag, f"{tag}: {v}", v.witness))
    g1, g2 = p.b1.grammar, p.b2.grammar
    if g1.alphabets != g2.alphabets:
        out.append(Violation("shared", "the grammars use different alphabets"))
    if g1.start != g2.start:
        out.append(Violation("shared", "the grammars have different start symbols"))
    if p.b1.decoder != p.b2.decoder:
        out.append(Violation("shared", "the grammars have different decoders"))
    for name in sorted(set(g1.productions) ^ set(g2.productions)):
        out.append(Violation("pairing", f"production {name!r} has no partner", (name,)))
    for name, _ in p.production_pairs:
        q1, q2 = g1.productions[name], g2.productions[name]
        if q1.head != q2.head:
            out.append(Violation("pairing", f"{name}: heads {q1.head!r} and {q2.head!r} differ",
                                 (name,)))
        nt1 = {v: q1.body.vertices[v] for v in q1.body.nonterminals}
        nt2 = {v: q2.body.vertices[v] for v in q2.body.nonterminals}
        if nt1 != nt2:
            out.append(Violation("NT", f"{name}: non-terminals {sorted(nt1.items())} and "
                                       f"{sorted(nt2.items())} do not correspond", (name,)))
        io1, io2 = _body_io(q1.body), _body_io(q2.body)
        for kind, a, b in (("inputs", io1[0], io2[0]), ("outputs", io1[1], io2[1])):
            if a != b:
                out.append(Violation("IO", f"{name}: {kind} {sorted(a.items())} and "
                                           f"{sorted(b.items())} do not correspond", (name,)))
    return Report(tuple(out))


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    return name


def instantiate(p: RewritePattern, t: DerivationTrace) -> RuleSpan:
    """Replay ``t`` in both grammars; the results form a rewrite rule."""
    rep = validate_pattern(p)
    if not rep:
        raise PatternError(f"invalid rewrite pattern: {rep.first}")
    try:
        lhs = concrete_derive(p.b1, t)
    except GraphError as exc:
        raise PatternError(f"trace does not complete in grammar1: {exc}") from exc
    try:
        rhs = concrete_derive(p.b2, t)
    except GraphError as exc:
        raise PatternError(f"trace does not complete in grammar2: {exc}") from exc
    l_in, l_out = _boundary(lhs)
    r_in, r_out = _boundary(rhs)
    if l_in != r_in or l_out != r_out:
        raise PatternError("instantiation does not preserve input/output names")
    boundary = l_in | l_out
    taken = set(lhs.vertices) | set(rhs.vertices)
    rename = {}
    for v in rhs.vertices:
        if v in lhs.vertices and v not in boundary:
            rename[v] = _fresh(v + "'", taken)
            taken.add(rename[v])
    rule = RuleSpan(lhs, rhs.rename(rename), name="instance")
    rep = validate_rule(rule)
    if not rep:
        raise PatternError(f"instantiation is not a rewrite rule: {rep.first}")
    return rule


def synchronized_forms(p: RewritePattern, t: DerivationTrace):
    """Pairs of sentential forms after each step of ``t`` in both grammars."""
    try:
        yield from zip(derive_steps(p.b1.grammar, t), derive_steps(p.b2.grammar, t),
                       strict=True)
    except GrammarError as exc:
        raise PatternError(str(exc)) from exc
