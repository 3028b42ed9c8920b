from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from besg import cli, io
from besg import fixtures as F
from besg.graph import is_minimal, wire_homeomorphic

# -- documents -----------------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_graph_documents_round_trip(seed):
    g = oracles.random_string_graph(random.Random(seed), F.ALPHABETS, 12)
    doc = json.loads(io.dumps(io.graph_to_json(g)))
    assert io.graph_from_json(doc) == g


@pytest.mark.parametrize("name", sorted(F.grammars()))
def test_grammar_documents_round_trip(name):
    b = F.grammars()[name]
    doc = json.loads(io.dumps(io.grammar_to_json(b)))
    assert io.grammar_from_json(doc) == b


def test_rule_pattern_and_trace_documents_round_trip():
    for r in F.rules().values():
        assert io.rule_from_json(json.loads(io.dumps(io.rule_to_json(r)))) == r
    for p in F.patterns().values():
        assert io.pattern_from_json(json.loads(io.dumps(io.pattern_to_json(p)))) == p
    t = F.trace(("S", "start"), ("S.X", "last"))
    assert io.trace_from_json(io.trace_to_json(t)) == t


def test_output_is_deterministic():
    a = io.dumps(io.grammar_to_json(F.complete_grammar()))
    b = io.dumps(io.grammar_to_json(F.complete_grammar()))
    assert a == b and a.endswith("\n")


@pytest.mark.parametrize("mutate, fragment", [
    (lambda d: d.update(extra=1), "unknown field"),
    (lambda d: d.update(format_version=99), "format_version"),
    (lambda d: d.update(kind="rule"), "kind"),
    (lambda d: d.pop("edges"), "missing field"),
    (lambda d: d["edges"].append(["in", "e"]), "edges"),
    (lambda d: d["vertices"].update(zz="nope"), "nope"),
])
def test_malformed_graph_documents(mutate, fragment):
    doc = io.graph_to_json(F.diagram())
    mutate(doc)
    with pytest.raises(io.FormatError, match=fragment):
        io.graph_from_json(doc)


def test_dot_output():
    dot = io.to_dot(F.graph("a:white b:white x:X", "a>alpha>b a>alpha>x"))
    assert dot.startswith('digraph "G" {')
    assert "style=dashed" in dot and "shape=box" in dot


# -- command line --------------------------------------------------------------


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / f"{name}.json"
        io.save(str(path), doc)
        return str(path)
    return write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, json.loads(out) if out else None, err


def test_cli_graph_commands(files, capsys, tmp_path):
    diagram = files("diagram", io.graph_to_json(F.diagram()))
    bad = files("bad", io.graph_to_json(F.graph("a:white b:white", "a>b")))
    code, doc, _ = run(capsys, "graph", "validate", diagram)
    assert code == 0 and doc["ok"]
    code, doc, _ = run(capsys, "graph", "validate", bad)
    assert code == 1 and doc["violations"][0]["condition"] == "1"
    a, b = F.merge_pair()
    pa, pb = files("a", io.graph_to_json(a)), files("b", io.graph_to_json(b))
    assert run(capsys, "graph", "homeo", pa, pb)[0] == 0
    assert run(capsys, "graph", "iso", pa, pb)[0] == 1
    dot = tmp_path / "out.dot"
    code, doc, _ = run(capsys, "--dot", str(dot), "graph", "normalize", pa)
    normal = io.graph_from_json(doc)
    assert code == 0 and is_minimal(normal) and wire_homeomorphic(normal, b)
    assert dot.read_text().startswith("digraph")


def test_cli_rule_commands(files, capsys, tmp_path):
    rule = files("fuse", io.rule_to_json(F.composite_rule()))
    target = files("target", io.graph_to_json(F.composite_target()))
    assert run(capsys, "rule", "validate", rule)[0] == 0
    code, doc, _ = run(capsys, "rule", "apply", rule, target)
    assert code == 0
    assert wire_homeomorphic(io.graph_from_json(doc), F.composite_result())
    code, doc, _ = run(capsys, "rule", "apply", "--index", "9", rule, target)
    assert code == 1 and doc == {"applied": False, "matchings": 4}
    code, doc, _ = run(capsys, "match", "find", "--limit", "2",
                       files("lhs", io.graph_to_json(F.composite_rule().lhs)), target)
    assert code == 0 and len(doc["matchings"]) == 2
    out = tmp_path / "result.json"
    assert cli.main(["--out", str(out), "rule", "apply", rule, target]) == 0
    assert json.loads(out.read_text())["kind"] == "graph"


def test_cli_grammar_commands(files, capsys):
    g = files("complete", io.grammar_to_json(F.complete_grammar()))
    k3 = files("k3", io.graph_to_json(F.complete_graph(3)))
    p3 = files("p3", io.graph_to_json(F.path_graph(3)))
    assert run(capsys, "grammar", "validate", g)[0] == 0
    code, doc, _ = run(capsys, "grammar", "enumerate", "--max-size", "30", g)
    assert code == 0 and len(doc["members"]) == 3
    code, doc, _ = run(capsys, "grammar", "member", g, k3)
    assert code == 0 and doc["member"] and doc["witness"]["trace"]["steps"]
    code, doc, _ = run(capsys, "grammar", "member", g, p3)
    assert code == 1 and doc == {"member": False, "witness": None}
    assert run(capsys, "grammar", "wirebound", g)[1]["max_wire_bound"] == 2
    assert run(capsys, "grammar", "exhaustive", g)[0] == 0
    loop = files("loop", io.grammar_to_json(F.bare_loop_grammar()))
    assert run(capsys, "grammar", "exhaustive", loop)[0] == 1
    code, doc, _ = run(capsys, "grammar", "matches", g, k3)
    assert code == 0 and len(doc["matches"]) == 1
    t = files("t", io.trace_to_json(F.trace(("S", "start"), ("S.X", "last"))))
    code, doc, _ = run(capsys, "grammar", "derive", g, t)
    assert code == 0 and oracles.is_wire_connected_complete(io.graph_from_json(doc), 2)


def test_cli_pattern_and_transform_commands(files, capsys):
    pat = files("pattern", io.pattern_to_json(F.complete_to_star()))
    t = files("t", io.trace_to_json(F.trace(("S", "start"), ("S.X", "last"))))
    assert run(capsys, "pattern", "validate", pat)[0] == 0
    code, doc, _ = run(capsys, "pattern", "instantiate", pat, t)
    assert code == 0 and oracles.is_star(io.rule_from_json(doc).rhs, 2)
    b = F.decorated_complete()
    g = files("dec", io.grammar_to_json(b))
    rule = files("erase", io.rule_to_json(F.erase_grey()))
    code, doc, _ = run(capsys, "transform", "step", g, rule)
    assert code == 0 and doc["results"]
    first = doc["results"][0]
    b2 = files("b2", first["grammar"])
    code, doc, _ = run(capsys, "transform", "admissible", g, b2, rule, t)
    assert code == 0 and doc["admissible"] and len(doc["chain"]) == doc["n"]
    code, doc, _ = run(capsys, "transform", "induced",
                       files("cws", io.grammar_to_json(F.complete_with_outputs())), pat)
    assert code == 1 and doc["induced"] == []


def test_cli_errors(files, capsys, tmp_path):
    code, _, err = run(capsys, "graph", "frobnicate")
    assert code == 2 and err.startswith("besg-error: usage:")
    missing = str(tmp_path / "missing.json")
    code, _, err = run(capsys, "graph", "validate", missing)
    assert code == 2 and err.startswith("besg-error: format:")
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert run(capsys, "graph", "validate", str(broken))[2].startswith("besg-error: format:")
    g = files("complete", io.grammar_to_json(F.complete_grammar()))
    t = files("t", io.trace_to_json(F.trace(("S", "start"))))
    assert run(capsys, "grammar", "derive", g, t)[2].startswith("besg-error: grammar:")
    pat = files("pattern", io.pattern_to_json(F.complete_to_star()))
    assert run(capsys, "pattern", "instantiate", pat, t)[2].startswith("besg-error: pattern:")
    bad = files("bad", io.graph_to_json(F.graph("a:white b:white", "a>b")))
    assert run(capsys, "graph", "normalize", bad)[2].startswith("besg-error: graph:")
    # a document of the wrong kind is a format error
    assert run(capsys, "grammar", "validate", bad)[2].startswith("besg-error: format:")
