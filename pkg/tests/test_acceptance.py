"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import random
import time

import matching_check
import oracles
from besg import fixtures as F
from besg.besg import concrete_derive, decode_in_order, enumerate_language, max_wire_bound
from besg.decision import membership
from besg.dpo import rewrite, validate_rule
from besg.grammar import derive, derive_steps, leftmost_traces, random_trace
from besg.graph import boundary, is_string_graph, stretch_wire, wire_homeomorphic, wires
from besg.matching import find_matchings
from besg.pattern import instantiate, validate_pattern
from besg.transform import check_admissibility, induced_pattern, transform_step


def complete_trace(n: int):
    steps = [("S", "start")]
    x = "S.X"
    for _ in range(n - 2):
        steps.append((x, "more"))
        x += ".X"
    steps.append((x, "last"))
    return F.trace(*steps)


def test_criterion_01_diagram_is_a_string_graph(criterion):
    start = time.perf_counter()
    g = F.diagram()
    ins, outs = boundary(g)
    ok_graph = bool(is_string_graph(g))
    elapsed = time.perf_counter() - start
    passed = ok_graph and (len(ins), len(outs)) == (1, 1) and elapsed < 1
    criterion(1, passed, f"string graph={ok_graph}, inputs={len(ins)}, outputs={len(outs)}, "
                         f"{elapsed:.3f}s")
    assert passed


def test_criterion_02_composite_rewrite(criterion):
    start = time.perf_counter()
    r = F.composite_rule()
    ms = find_matchings(r.lhs, F.composite_target())
    results = [rewrite(F.composite_target(), r, m) for m in ms]
    ok = bool(results) and all(wire_homeomorphic(h, F.composite_result()) for h in results)
    elapsed = time.perf_counter() - start
    passed = ok and elapsed < 1
    criterion(2, passed, f"{len(results)} rewrites, all homeomorphic to expected={ok}, "
                         f"{elapsed:.3f}s")
    assert passed


def test_criterion_03_complete_graph_language(criterion):
    start = time.perf_counter()
    members = [g for g, _, _ in enumerate_language(F.complete_grammar(), 30)]
    complete = sorted(len(g.node_vertices) for g in members
                      if oracles.is_wire_connected_complete(g, len(g.node_vertices)))
    elapsed = time.perf_counter() - start
    passed = len(members) == 3 and complete == [2, 3, 4] and elapsed < 60
    criterion(3, passed, f"{len(members)} members, complete on {complete} nodes, "
                         f"{elapsed:.2f}s")
    assert passed


def test_criterion_04_membership(criterion):
    start = time.perf_counter()
    b = F.complete_grammar()
    k3 = F.complete_graph(3)
    split, path = stretch_wire(k3, wires(k3)[0], 4)   # split three times
    assert len(path) == 4
    checks = {}
    for name, g in (("K3", k3), ("K3 split", split)):
        ans = membership(g, b)
        w = ans.witness
        replay = w is not None and derive(b.grammar, w.trace) == w.encoded and \
            oracles.isomorphic(concrete_derive(b, w.trace), w.h_tilde) and \
            wire_homeomorphic(w.h_tilde, g)
        checks[name] = ans.member and replay
    checks["P3 rejected"] = not membership(F.path_graph(3), b).member
    elapsed = time.perf_counter() - start
    passed = all(checks.values()) and elapsed < 60
    criterion(4, passed, f"{checks}, {elapsed:.2f}s")
    assert passed


def test_criterion_05_random_derivations(criterion):
    start = time.perf_counter()
    names = ["complete", "complete_with_outputs", "star", "chain", "gather", "ladder",
             "hadamard_clique", "decorated_complete", "tree"]
    grammars = F.grammars()
    rng = random.Random(5)
    failures = 0
    for i in range(500):
        b = grammars[names[i % len(names)]]
        t = random_trace(b.grammar, rng, 8)
        if any(oracles.sentential_form_problems(f) for f in derive_steps(b.grammar, t)):
            failures += 1
        elif not is_string_graph(concrete_derive(b, t)):
            failures += 1
    elapsed = time.perf_counter() - start
    passed = failures == 0 and elapsed < 120
    criterion(5, passed, f"500 traces over {len(names)} grammars, {failures} failures, "
                         f"{elapsed:.2f}s")
    assert passed


def test_criterion_06_wire_length_bound(criterion):
    failures = []
    checked = 0
    for name, b in F.grammars().items():
        bound = max_wire_bound(b)
        for g, _, _ in enumerate_language(b, 30):
            checked += 1
            if oracles.max_wire_length(g) > bound:
                failures.append(name)
    passed = not failures
    criterion(6, passed, f"{checked} members of {len(F.grammars())} grammars, "
                         f"failures: {failures}")
    assert passed


def test_criterion_07_complete_to_star_instances(criterion):
    start = time.perf_counter()
    p = F.complete_to_star()
    ok = {}
    for n in (2, 3, 4):
        r = instantiate(p, complete_trace(n))
        ok[n] = bool(validate_rule(r)) and \
            oracles.is_wire_connected_complete(r.lhs, n, outputs=True) and \
            oracles.is_star(r.rhs, n) and boundary(r.lhs) == boundary(r.rhs)
    elapsed = time.perf_counter() - start
    passed = bool(validate_pattern(p)) and all(ok.values()) and elapsed < 10
    criterion(7, passed, f"instances valid {ok}, {elapsed:.2f}s")
    assert passed


def test_criterion_08_decoding_confluence(criterion):
    rng = random.Random(8)
    t = F.decoder()
    failures = 0
    with_had = 0
    for _ in range(100):
        enc = oracles.random_encoded_graph(rng)
        edges = sorted(e for e in enc.edges if e[1] in enc.alphabets.encoding_labels)
        with_had += any(e[1] == "had" for e in edges)
        a, b = list(edges), list(edges)
        rng.shuffle(a)
        rng.shuffle(b)
        if not oracles.isomorphic(decode_in_order(enc, t, a), decode_in_order(enc, t, b)):
            failures += 1
    passed = failures == 0 and with_had > 0
    criterion(8, passed, f"100 graphs ({with_had} with Hadamard edges), {failures} failures")
    assert passed


def test_criterion_09_substitution_confluence(criterion):
    rng = random.Random(9)
    cases = failures = 0
    while cases < 100:
        form = oracles.random_multi_nt_form(rng)
        if form is None:
            continue
        cases += 1
        if not oracles.swapped_orders_agree(form, rng):
            failures += 1
    passed = failures == 0
    criterion(9, passed, f"{cases} forms with two or more non-terminals, {failures} failures")
    assert passed


def test_criterion_10_admissible_transformations(criterion):
    # these grammars hold one non-terminal at a time, so leftmost traces are all
    # traces; five steps reach n = 3 for the recursive production, while the
    # start and closing productions occur once in every trace of any length
    start = time.perf_counter()
    failures = []
    checked = 0
    cases = F.transform_cases()
    for label, b, sr in cases:
        for res in transform_step(b, sr):
            if not validate_pattern(induced_pattern(b, res.b_prime)):
                failures.append((label, res.production, "pattern"))
                continue
            for t in leftmost_traces(b.grammar, 5):
                if t.count(res.production) > 3:
                    continue
                checked += 1
                adm = check_admissibility(b, res.b_prime, sr, t)
                if not adm or len(adm.chain) != t.count(res.production):
                    failures.append((label, res.production, t.steps))
    elapsed = time.perf_counter() - start
    passed = len(cases) >= 3 and not failures and elapsed < 120
    criterion(10, passed, f"{len(cases)} cases, {checked} traces checked, "
                          f"{len(failures)} failures, {elapsed:.2f}s")
    assert passed


def test_criterion_11_matching_oracle(criterion):
    discrepancies = []
    total = 0
    for seed in range(50):
        ok, n = matching_check.agrees_with_brute_force(seed)
        total += n
        if not ok:
            discrepancies.append(seed)
    passed = not discrepancies
    criterion(11, passed, f"50 pairs, {total} classes, discrepancies at seeds {discrepancies}")
    assert passed
