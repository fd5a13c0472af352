"""Test-only constructions shared across modules."""

import numpy as np

from colexgraph import LabeledGraph, Relation, lambda_sets
from colexgraph.graph import Alphabet


def strict_label_relation(g: LabeledGraph, u_marked=()) -> Relation:
    """The canonical non-trivial co-lex relation: (u, v) whenever every label of
    u strictly precedes every label of v, plus the diagonal."""
    lams = lambda_sets(g, u_marked)
    rank = g.alphabet.rank
    bits = np.eye(g.n, dtype=bool)
    for u in range(g.n):
        hi = max(rank(s) for s in lams[u])
        for v in range(g.n):
            if u != v and hi < min(rank(s) for s in lams[v]):
                bits[u, v] = True
    return Relation(bits)


def expected_double_hub_relation(n: int) -> Relation:
    """Relation the two-hub family must produce: sinks all mutually comparable,
    hubs mutually comparable, every hub below every sink."""
    total = n + 2
    bits = np.eye(total, dtype=bool)
    for i in range(n):
        for j in range(n):
            bits[i, j] = True
    for h in (n, n + 1):
        for i in range(n):
            bits[h, i] = True
    for h1 in (n, n + 1):
        for h2 in (n, n + 1):
            bits[h1, h2] = True
    return Relation(bits)


def two_node_alphabet_graph() -> LabeledGraph:
    """Node 2 reads only 'b', node 3 reads only 'a': (2, 3) can never be ordered."""
    return LabeledGraph(4, frozenset({(0, 2, "b"), (1, 3, "a")}), Alphabet(("a", "b")))


def quotient_pipeline(g: LabeledGraph, marked=()):
    """Graph -> (quotient, chain partition) via the maximum relation."""
    from colexgraph import max_colex_relation, min_chain_partition, quotient_graph
    pre = max_colex_relation(g, marked)
    qg = quotient_graph(g, pre, u_marked=marked)
    return qg, min_chain_partition(qg.order)


def nfa_pipeline(nfa):
    """Trim automaton -> (quotient NFA, chain partition) with the initial marked."""
    from colexgraph import max_colex_relation, min_chain_partition, quotient_nfa
    pre = max_colex_relation(nfa.graph, {nfa.initial})
    qn = quotient_nfa(nfa, pre)
    return qn, min_chain_partition(qn.quotient.order)
