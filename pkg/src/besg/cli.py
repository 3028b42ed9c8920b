"""Command-line interface.

Exit codes: 0 for success or a yes answer, 1 for a well-formed no answer,
2 for errors.  Errors are reported on stderr as one line starting with
``besg-error: <kind>:``.  Result documents go to stdout (or ``--out``).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from . import io
from .besg import enumerate_language, max_wire_bound, validate_besg, concrete_derive
from .decision import enumerate_matches, is_match_exhaustive, membership
from .dpo import rewrite, validate_rule
from .grammar import GrammarError
from .graph import (GraphError, Report, check_string_graph, graph_isomorphic,
                    minimal_representative, wire_homeomorphic)
from .matching import Matching, find_matchings
from .pattern import PatternError, instantiate, validate_pattern
from .transform import check_admissibility, enumerate_induced, transform_step

DEFAULT_MAX_SIZE = 20
DEFAULT_LIMIT = 1000


@dataclass
class CommandResult:
    exit_code: int
    document: Any = None
    dot: Optional[str] = None


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:     # argparse would exit with its own format
        raise UsageError(message)


def _report(rep: Report) -> dict:
    return {"ok": rep.ok,
            "violations": [{"condition": v.condition, "message": v.message}
                           for v in rep.violations]}


def _matching_doc(m: Matching) -> dict:
    return {"map": dict(sorted(m.map.items())),
            "expanded_target": io.graph_to_json(m.expanded_target)}


def _yes(flag: bool, doc: Any, dot: Optional[str] = None) -> CommandResult:
    return CommandResult(0 if flag else 1, doc, dot)


# -- graph ---------------------------------------------------------------------


def graph_validate(a) -> CommandResult:
    g = io.load(a.graph, "graph")
    rep = check_string_graph(g)
    return _yes(rep.ok, _report(rep))


def graph_normalize(a) -> CommandResult:
    g = io.load(a.graph, "graph")
    h = minimal_representative(g)
    return CommandResult(0, io.graph_to_json(h), io.to_dot(h))


def graph_iso(a) -> CommandResult:
    g, h = io.load(a.first, "graph"), io.load(a.second, "graph")
    m = graph_isomorphic(g, h)
    return _yes(m is not None, {"isomorphic": m is not None,
                                "mapping": dict(sorted(m.items())) if m else None})


def graph_homeo(a) -> CommandResult:
    g, h = io.load(a.first, "graph"), io.load(a.second, "graph")
    ok = wire_homeomorphic(g, h)
    return _yes(ok, {"wire_homeomorphic": ok})


# -- matching and rules --------------------------------------------------------


def match_find(a) -> CommandResult:
    l, h = io.load(a.pattern, "graph"), io.load(a.target, "graph")
    ms = find_matchings(l, h)[:a.limit]
    return _yes(bool(ms), {"matchings": [_matching_doc(m) for m in ms]})


def rule_validate(a) -> CommandResult:
    rep = validate_rule(io.load(a.rule, "rule"))
    return _yes(rep.ok, _report(rep))


def rule_apply(a) -> CommandResult:
    r, g = io.load(a.rule, "rule"), io.load(a.target, "graph")
    rep = validate_rule(r)
    if not rep:
        raise GraphError(f"invalid rule: {rep.first}")
    ms = find_matchings(r.lhs, g)
    if a.index >= len(ms):
        return CommandResult(1, {"applied": False, "matchings": len(ms)})
    h = rewrite(g, r, ms[a.index], check_target=False)
    return CommandResult(0, io.graph_to_json(h), io.to_dot(h))


# -- grammars ------------------------------------------------------------------


def grammar_validate(a) -> CommandResult:
    rep = validate_besg(io.load(a.grammar, "grammar"))
    return _yes(rep.ok, _report(rep))


def grammar_derive(a) -> CommandResult:
    b, t = io.load(a.grammar, "grammar"), io.load(a.trace, "trace")
    h = concrete_derive(b, t)
    return CommandResult(0, io.graph_to_json(h), io.to_dot(h))


def grammar_enumerate(a) -> CommandResult:
    b = io.load(a.grammar, "grammar")
    members = []
    for member, _, trace in enumerate_language(b, a.max_size):
        if len(members) >= a.limit:
            break
        members.append({"trace": io.trace_to_json(trace), "graph": io.graph_to_json(member)})
    return CommandResult(0, {"max_size": a.max_size, "members": members})


def grammar_member(a) -> CommandResult:
    b, h = io.load(a.grammar, "grammar"), io.load(a.graph, "graph")
    ans = membership(h, b)
    doc: dict = {"member": ans.member, "witness": None}
    dot = None
    if ans.witness is not None:
        w = ans.witness
        doc["witness"] = {"trace": io.trace_to_json(w.trace),
                          "encoded": io.graph_to_json(w.encoded),
                          "h_tilde": io.graph_to_json(w.h_tilde)}
        dot = io.to_dot(w.h_tilde)
    return _yes(ans.member, doc, dot)


def grammar_matches(a) -> CommandResult:
    b, h = io.load(a.grammar, "grammar"), io.load(a.graph, "graph")
    found = enumerate_matches(h, b)[:a.limit]
    return _yes(bool(found), {"matches": [
        {"trace": io.trace_to_json(r.trace), "k": io.graph_to_json(r.k),
         "matching": _matching_doc(r.matching)} for r in found]})


def grammar_wirebound(a) -> CommandResult:
    return CommandResult(0, {"max_wire_bound": max_wire_bound(io.load(a.grammar, "grammar"))})


def grammar_exhaustive(a) -> CommandResult:
    rep = is_match_exhaustive(io.load(a.grammar, "grammar"))
    return _yes(rep.ok, _report(rep))


# -- patterns and transformations ----------------------------------------------


def pattern_validate(a) -> CommandResult:
    rep = validate_pattern(io.load(a.pattern, "pattern"))
    return _yes(rep.ok, _report(rep))


def pattern_instantiate(a) -> CommandResult:
    p, t = io.load(a.pattern, "pattern"), io.load(a.trace, "trace")
    r = instantiate(p, t)
    return CommandResult(0, io.rule_to_json(r), io.to_dot(r.lhs))


def _transform_doc(res) -> dict:
    return {"production": res.production, "grammar": io.grammar_to_json(res.b_prime),
            "matching": dict(sorted(res.matching.map.items()))}


def transform_step_cmd(a) -> CommandResult:
    b, r = io.load(a.grammar, "grammar"), io.load(a.rule, "rule")
    results = transform_step(b, r)[:a.limit]
    return _yes(bool(results), {"results": [_transform_doc(x) for x in results]})


def transform_admissible(a) -> CommandResult:
    b, b2 = io.load(a.grammar, "grammar"), io.load(a.transformed, "grammar")
    r, t = io.load(a.rule, "rule"), io.load(a.trace, "trace")
    res = check_admissibility(b, b2, r, t)
    return _yes(res.admissible, {"admissible": res.admissible, "n": res.n,
                                 "reason": res.reason,
                                 "chain": [io.graph_to_json(g) for g in res.chain]})


def transform_induced(a) -> CommandResult:
    b, p = io.load(a.grammar, "grammar"), io.load(a.pattern, "pattern")
    out = []
    for item in enumerate_induced(b, p, a.max_size):
        if len(out) >= a.limit:
            break
        out.append({"trace": io.trace_to_json(item.trace), "rule": io.rule_to_json(item.rule),
                    "results": [_transform_doc(x) for x in item.results]})
    return _yes(bool(out), {"max_size": a.max_size, "induced": out})


# -- wiring --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="besg", description="String graph rewriting and B-ESG grammars.")
    parser.add_argument("--dot", metavar="PATH", help="also write the main graph as DOT")
    parser.add_argument("--out", metavar="PATH", help="write the result document here")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def cmd(group, name, func, *args, enum=False, extra=None):
        sp = group.add_parser(name)
        for arg in args:
            sp.add_argument(arg)
        if enum:
            sp.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE,
                            help=f"size budget, vertices plus edges (default {DEFAULT_MAX_SIZE})")
            sp.add_argument("--limit", type=int, default=DEFAULT_LIMIT,
                            help=f"most results to report (default {DEFAULT_LIMIT})")
        if extra:
            extra(sp)
        sp.set_defaults(func=func)

    def sub(name):
        return groups.add_parser(name).add_subparsers(dest="command", required=True,
                                                      parser_class=_Parser)

    g = sub("graph")
    cmd(g, "validate", graph_validate, "graph")
    cmd(g, "normalize", graph_normalize, "graph")
    cmd(g, "iso", graph_iso, "first", "second")
    cmd(g, "homeo", graph_homeo, "first", "second")
    m = sub("match")
    cmd(m, "find", match_find, "pattern", "target", enum=True)
    r = sub("rule")
    cmd(r, "validate", rule_validate, "rule")
    cmd(r, "apply", rule_apply, "rule", "target",
        extra=lambda sp: sp.add_argument("--index", type=int, default=0))
    gr = sub("grammar")
    cmd(gr, "validate", grammar_validate, "grammar")
    cmd(gr, "derive", grammar_derive, "grammar", "trace")
    cmd(gr, "enumerate", grammar_enumerate, "grammar", enum=True)
    cmd(gr, "member", grammar_member, "grammar", "graph")
    cmd(gr, "matches", grammar_matches, "grammar", "graph", enum=True)
    cmd(gr, "wirebound", grammar_wirebound, "grammar")
    cmd(gr, "exhaustive", grammar_exhaustive, "grammar")
    p = sub("pattern")
    cmd(p, "validate", pattern_validate, "pattern")
    cmd(p, "instantiate", pattern_instantiate, "pattern", "trace")
    t = sub("transform")
    cmd(t, "step", transform_step_cmd, "grammar", "rule", enum=True)
    cmd(t, "admissible", transform_admissible, "grammar", "transformed", "rule", "trace")
    cmd(t, "induced", transform_induced, "grammar", "pattern", enum=True)
    return parser


def _error_kind(exc: Exception) -> str:
    if isinstance(exc, UsageError):
        return "usage"
    if isinstance(exc, io.FormatError):
        return "format"
    if isinstance(exc, PatternError):
        return "pattern"
    if isinstance(exc, GrammarError):
        return "grammar"
    return "graph"


def run(argv: Sequence[str]) -> CommandResult:
    """Parse ``argv`` and run the command; errors are raised, not printed."""
    args = build_parser().parse_args(list(argv))
    return args.func(args)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        result = args.func(args)
    except (UsageError, GraphError) as exc:
        msg = " ".join(str(exc).split())
        print(f"besg-error: {_error_kind(exc)}: {msg}", file=sys.stderr)
        return 2
    text = io.dumps(result.document)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.dot and result.dot is not None:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(result.dot)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
