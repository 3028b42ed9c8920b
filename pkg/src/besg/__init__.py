"""String graphs, their rewriting, and B-ESG grammars describing infinite
families of string graphs."""

from .besg import (BESG, DecodeRule, DecodingSystem, concrete_derive, decode,
                   enumerate_language, max_wire_bound, validate_besg)
from .decision import (MembershipAnswer, enumerate_matches, is_match_exhaustive,
                       membership)
from .dpo import RuleSpan, rewrite, validate_rule
from .grammar import (ConnectionInstruction, DerivationTrace, Grammar, Production, derive,
                      enumerate_sentential_forms, substitute)
from .graph import (Alphabets, Graph, GraphError, Report, boundary, check_string_graph,
                    graph_isomorphic, is_string_graph, merge_wire_vertices,
                    minimal_representative, split_wire_vertex, wire_homeomorphic, wires)
from .matching import Matching, find_matchings
from .pattern import RewritePattern, instantiate, validate_pattern
from .transform import (check_admissibility, enumerate_induced, final_subgraph,
                        induced_pattern, transform_step)

__version__ = "0.1.0"

__all__ = [
    "Alphabets",
    "BESG",
    "boundary",
    "check_admissibility",
    "check_string_graph",
    "concrete_derive",
    "ConnectionInstruction",
    "decode",
    "DecodeRule",
    "DecodingSystem",
    "DerivationTrace",
    "derive",
    "enumerate_induced",
    "enumerate_language",
    "enumerate_matches",
    "enumerate_sentential_forms",
    "final_subgraph",
    "find_matchings",
    "Grammar",
    "Graph",
    "graph_isomorphic",
    "GraphError",
    "induced_pattern",
    "instantiate",
    "is_match_exhaustive",
    "is_string_graph",
    "Matching",
    "max_wire_bound",
    "membership",
    "MembershipAnswer",
    "merge_wire_vertices",
    "minimal_representative",
    "Production",
    "Report",
    "rewrite",
    "RewritePattern",
    "RuleSpan",
    "split_wire_vertex",
    "substitute",
    "transform_step",
    "validate_besg",
    "validate_pattern",
    "validate_rule",
    "wire_homeomorphic",
    "wires",
]
