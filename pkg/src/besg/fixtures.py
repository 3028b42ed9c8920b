"""Example graphs, grammars, decoders and rules used by the tests and docs.

Graphs are written in a small notation: vertices as ``"name:label"`` words and
edges as ``"s>t"`` (label ``e``) or ``"s>label>t"``.
"""

from __future__ import annotations

from .besg import BESG, DecodeRule, DecodingSystem
from .dpo import RuleSpan
from .grammar import IN, DerivationTrace, Grammar, Production
from .graph import Alphabets, Graph
from .pattern import RewritePattern

ALPHABETS = Alphabets(
    node_labels={"white", "black", "grey", "H", "f", "g", "h", "k"},
    wire_labels={"w"},
    nonterminal_labels={"S", "X"},
    edge_labels={"e", "alpha", "beta", "had"},
    encoding_labels={"alpha", "beta", "had"},
)


def graph(vertices: str, edges: str = "", alphabets: Alphabets = ALPHABETS) -> Graph:
    verts = {}
    for word in vertices.split():
        name, label = word.split(":")
        verts[name] = label
    es = set()
    for word in edges.split():
        parts = word.split(">")
        if len(parts) == 2:
            es.add((parts[0], "e", parts[1]))
        else:
            es.add((parts[0], parts[1], parts[2]))
    return Graph(alphabets, verts, frozenset(es))


def trace(*steps: tuple[str, str]) -> DerivationTrace:
    return DerivationTrace(tuple(steps))


# -- string graphs -------------------------------------------------------------


def diagram() -> Graph:
    """Three boxes f, g, h: f feeds g and h, g feeds h; one input, one output."""
    return graph("in:w f:f fg:w g:g gh:w fh:w h:h out:w",
                 "in>f f>fg fg>g g>gh gh>h f>fh fh>h h>out")


def composite_rule() -> RuleSpan:
    """g after f becomes the single box k."""
    return RuleSpan(graph("i:w f:f m:w g:g o:w", "i>f f>m m>g g>o"),
                    graph("i:w k:k o:w", "i>k k>o"), name="fuse")


def composite_target() -> Graph:
    """f then g then h, with h taking a second input."""
    return graph("x:w f:f y:w g:g z:w h:h p:w q:w",
                 "x>f f>y y>g g>z z>h p>h h>q")


def composite_result() -> Graph:
    return graph("x:w k:k z:w h:h p:w q:w", "x>k k>z z>h p>h h>q")


def merge_pair() -> tuple[Graph, Graph]:
    """The same connection drawn with a two-vertex and a one-vertex wire."""
    return (graph("a:white u:w v:w b:white", "a>u u>v v>b"),
            graph("a:white u:w b:white", "a>u u>b"))


def complete_graph(n: int, outputs: bool = False, label: str = "white") -> Graph:
    """Wire-connected complete graph on ``n`` nodes, wires running i -> j for i < j."""
    vs = [f"n{i}:{label}" for i in range(n)]
    es = []
    for i in range(n):
        for j in range(i + 1, n):
            vs.append(f"w{i}_{j}:w")
            es += [f"n{i}>w{i}_{j}", f"w{i}_{j}>n{j}"]
        if outputs:
            vs.append(f"o{i}:w")
            es.append(f"n{i}>o{i}")
    return graph(" ".join(vs), " ".join(es))


def path_graph(n: int) -> Graph:
    vs = [f"n{i}:white" for i in range(n)] + [f"w{i}:w" for i in range(n - 1)]
    es = [f"n{i}>w{i} w{i}>n{i + 1}" for i in range(n - 1)]
    return graph(" ".join(vs), " ".join(es))


# -- decoders ------------------------------------------------------------------


def _wire_rule(alpha: str, n1: str, n2: str, length: int = 1) -> DecodeRule:
    inner = [f"m{i}" for i in range(length)]
    vs = f"l:{n1} r:{n2} " + " ".join(f"{m}:w" for m in inner)
    chain = ["l"] + inner + ["r"]
    es = " ".join(f"{a}>{b}" for a, b in zip(chain, chain[1:]))
    return DecodeRule(alpha, n1, n2, graph(vs, es), "l", "r")


def _hadamard_rule(n1: str, n2: str) -> DecodeRule:
    return DecodeRule("had", n1, n2,
                      graph(f"l:{n1} m0:w box:H m1:w r:{n2}", "l>m0 m0>box box>m1 m1>r"),
                      "l", "r")


def decoder() -> DecodingSystem:
    """Plain wires for alpha and beta, two-vertex wires between greys, and a
    Hadamard box on every ``had`` edge (as used for local complementation)."""
    rules = [_wire_rule("alpha", "white", "white"),
             _wire_rule("beta", "black", "white"),
             _wire_rule("alpha", "grey", "grey", 2)]
    rules += [_hadamard_rule(a, b) for a in ("white", "black") for b in ("white", "black")]
    return DecodingSystem(rules)


def _grammar(*prods: Production) -> BESG:
    return BESG(Grammar(ALPHABETS, prods), decoder())


def _p(name: str, head: str, vertices: str, edges: str = "", conns=()) -> Production:
    return Production(name, head, graph(vertices, edges), conns)


def _to(label: str, target: str, enc: str = "alpha") -> tuple:
    return (label, enc, enc, target, IN)


# -- grammars ------------------------------------------------------------------


def complete_grammar() -> BESG:
    """All wire-connected complete graphs on two or more white nodes."""
    return _grammar(
        _p("start", "S", "a:white X:X", "a>alpha>X"),
        _p("more", "X", "b:white X:X", "b>alpha>X",
           [_to("white", "b"), _to("white", "X")]),
        _p("last", "X", "b:white", "", [_to("white", "b")]),
    )


def complete_with_outputs() -> BESG:
    """Complete graphs whose white nodes each carry one output wire."""
    return _grammar(
        _p("start", "S", "a:white o:w X:X", "a>o a>alpha>X"),
        _p("more", "X", "b:white o:w X:X", "b>o b>alpha>X",
           [_to("white", "b"), _to("white", "X")]),
        _p("last", "X", "b:white o:w", "b>o", [_to("white", "b")]),
    )


def star_grammar() -> BESG:
    """A black centre with a wire to each white node; each white node has an output."""
    return _grammar(
        _p("start", "S", "c:black ca:w a:white o:w X:X", "c>ca ca>a a>o c>beta>X"),
        _p("more", "X", "b:white o:w X:X", "b>o",
           [_to("black", "b", "beta"), _to("black", "X", "beta")]),
        _p("last", "X", "b:white o:w", "b>o", [_to("black", "b", "beta")]),
    )


def complete_to_star() -> RewritePattern:
    return RewritePattern(complete_with_outputs(), star_grammar())


def chain_grammar() -> BESG:
    """A directed path of white nodes, each node fed by one input wire."""
    return _grammar(
        _p("start", "S", "i:w a:white X:X", "i>a a>alpha>X"),
        _p("more", "X", "i:w b:white X:X", "i>b b>alpha>X", [_to("white", "b")]),
        _p("last", "X", "i:w b:white", "i>b", [_to("white", "b")]),
    )


def gather_grammar() -> BESG:
    """One white node collecting all the input wires (paired with the chain)."""
    return _grammar(
        _p("start", "S", "i:w X:X", "i>X"),
        _p("more", "X", "i:w X:X", "i>X", [("w", "e", "e", "X", IN)]),
        _p("last", "X", "i:w c:white", "i>c", [("w", "e", "e", "c", IN)]),
    )


def chain_to_gather() -> RewritePattern:
    return RewritePattern(chain_grammar(), gather_grammar())


def ladder_grammar() -> BESG:
    """Grey nodes in a row joined by two-vertex wires, each with an input and an
    output; the first step also adds a bare wire and the last a circle."""
    return _grammar(
        _p("start", "S", "u:w v:w i:w a:grey o:w X:X", "u>v i>a a>o a>alpha>X"),
        _p("more", "X", "i:w b:grey o:w X:X", "i>b b>o b>alpha>X", [_to("grey", "b")]),
        _p("last", "X", "i:w b:grey o:w c1:w c2:w", "i>b b>o c1>c2 c2>c1",
           [_to("grey", "b")]),
    )


def bare_loop_grammar() -> BESG:
    """Like the ladder, but every step adds a bare wire: not match-exhaustive."""
    return _grammar(
        _p("start", "S", "i:w a:grey o:w X:X", "i>a a>o a>alpha>X"),
        _p("more", "X", "u:w v:w i:w b:grey o:w X:X", "u>v i>b b>o b>alpha>X",
           [_to("grey", "b")]),
        _p("last", "X", "i:w b:grey o:w", "i>b b>o", [_to("grey", "b")]),
    )


def hadamard_clique() -> BESG:
    """Complete graphs of white nodes joined through Hadamard boxes, with outputs."""
    return _grammar(
        _p("start", "S", "a:white o:w X:X", "a>o a>had>X"),
        _p("more", "X", "b:white o:w X:X", "b>o b>had>X",
           [_to("white", "b", "had"), _to("white", "X", "had")]),
        _p("last", "X", "b:white o:w", "b>o", [_to("white", "b", "had")]),
    )


def decorated_complete() -> BESG:
    """Complete graphs whose outputs each pass through a grey node."""
    return _grammar(
        _p("start", "S", "a:white o:w d:grey o2:w X:X", "a>o o>d d>o2 a>alpha>X"),
        _p("more", "X", "b:white o:w d:grey o2:w X:X", "b>o o>d d>o2 b>alpha>X",
           [_to("white", "b"), _to("white", "X")]),
        _p("last", "X", "b:white o:w d:grey o2:w", "b>o o>d d>o2", [_to("white", "b")]),
    )


def decorated_chain() -> BESG:
    """The chain grammar with a grey node on every input wire."""
    return _grammar(
        _p("start", "S", "i:w d:grey m:w a:white X:X", "i>d d>m m>a a>alpha>X"),
        _p("more", "X", "i:w d:grey m:w b:white X:X", "i>d d>m m>b b>alpha>X",
           [_to("white", "b")]),
        _p("last", "X", "i:w d:grey m:w b:white", "i>d d>m m>b", [_to("white", "b")]),
    )


def tree_grammar() -> BESG:
    """Binary trees of white nodes with an output on every node; forms often
    hold several non-terminals at once."""
    return _grammar(
        _p("start", "S", "a:white o:w X1:X X2:X", "a>o a>alpha>X1 a>alpha>X2"),
        _p("fork", "X", "b:white o:w Y1:X Y2:X", "b>o b>alpha>Y1 b>alpha>Y2",
           [_to("white", "b")]),
        _p("leaf", "X", "b:white o:w", "b>o", [_to("white", "b")]),
    )


def pair_grammar() -> BESG:
    """A single production: two white nodes joined by a wire, each with an output."""
    return _grammar(_p("start", "S", "a:white m:w b:white o1:w o2:w",
                       "a>m m>b a>o1 b>o2"))


def grammars() -> dict[str, BESG]:
    """Every valid fixture grammar, by name."""
    return {
        "complete": complete_grammar(),
        "complete_with_outputs": complete_with_outputs(),
        "star": star_grammar(),
        "chain": chain_grammar(),
        "gather": gather_grammar(),
        "ladder": ladder_grammar(),
        "bare_loop": bare_loop_grammar(),
        "hadamard_clique": hadamard_clique(),
        "decorated_complete": decorated_complete(),
        "decorated_chain": decorated_chain(),
        "tree": tree_grammar(),
        "pair": pair_grammar(),
    }


def patterns() -> dict[str, RewritePattern]:
    return {"complete_to_star": complete_to_star(), "chain_to_gather": chain_to_gather()}


# -- rules ---------------------------------------------------------------------


def _grey_lhs() -> Graph:
    return graph("i:w d:grey j:w", "i>d d>j")


def erase_grey() -> RuleSpan:
    return RuleSpan(_grey_lhs(), graph("i:w j:w", "i>j"), name="erase_grey")


def double_grey() -> RuleSpan:
    return RuleSpan(_grey_lhs(), graph("i:w d1:grey m:w d2:grey j:w", "i>d1 d1>m m>d2 d2>j"),
                    name="double_grey")


def grey_to_black() -> RuleSpan:
    return RuleSpan(_grey_lhs(), graph("i:w k:black j:w", "i>k k>j"), name="grey_to_black")


def identity_grey() -> RuleSpan:
    return RuleSpan(_grey_lhs(), graph("i:w d2:grey j:w", "i>d2 d2>j"), name="identity")


def rules() -> dict[str, RuleSpan]:
    return {r.name: r for r in (composite_rule(), erase_grey(), double_grey(),
                                grey_to_black(), identity_grey())}


def transform_cases() -> list[tuple[str, BESG, RuleSpan]]:
    return [("decorated_complete/erase_grey", decorated_complete(), erase_grey()),
            ("decorated_complete/double_grey", decorated_complete(), double_grey()),
            ("decorated_chain/grey_to_black", decorated_chain(), grey_to_black())]
