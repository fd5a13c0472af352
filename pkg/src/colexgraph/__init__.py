"""Pattern matching on edge-labeled graphs through the maximum co-lex relation.

Pipeline: parse a graph, compute its maximum co-lex relation, collapse to the
quotient graph, chain-partition the induced partial order, and build an index
answering path and language queries as per-chain interval steps.
"""

from .chains import ChainPartition, max_antichain, min_chain_partition, preorder_width
from .graph import (AT, HASH, Alphabet, EmptyLanguageError, GraphFormatError, LabeledGraph,
                    Nfa, angle, format_graph, format_nfa, lambda_sets, parse_graph,
                    parse_nfa, trim_nfa)
from .index import (ConvexSet, Index, PatternError, QueryStats, SpaceReport, build_index,
                    build_nfa_index, parse_pattern)
from .quotient import (ClassPartition, QuotientGraph, QuotientNfa, classes, induced_order,
                       lift_classes, lift_relation, project_nodes, project_relation,
                       quotient_graph, quotient_nfa)
from .relation import (AxiomViolation, PairGraph, Preorder, Relation, dump_relation,
                       first_axiom_violation, is_colex_relation, max_colex_relation,
                       min_colex_containing, parse_relation, refines, transitive_closure,
                       union)

__version__ = "0.1.0"

__all__ = [
    "AT", "HASH", "Alphabet", "AxiomViolation", "ChainPartition", "ClassPartition",
    "ConvexSet", "EmptyLanguageError", "GraphFormatError", "Index", "LabeledGraph",
    "Nfa", "PairGraph", "PatternError", "Preorder", "QueryStats", "QuotientGraph",
    "QuotientNfa",
    "Relation", "SpaceReport", "angle", "build_index", "build_nfa_index", "classes",
    "dump_relation", "first_axiom_violation", "format_graph", "format_nfa",
    "induced_order", "is_colex_relation", "lambda_sets", "lift_classes", "lift_relation",
    "max_antichain", "max_colex_relation", "min_chain_partition", "min_colex_containing",
    "parse_graph", "parse_nfa", "parse_pattern", "parse_relation", "preorder_width",
    "project_nodes", "project_relation", "quotient_graph", "quotient_nfa", "refines",
    "transitive_closure", "trim_nfa", "union",
]
