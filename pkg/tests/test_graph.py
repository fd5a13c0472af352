import pytest
from hypothesis import given, settings

from colexgraph import (AT, HASH, Alphabet, EmptyLanguageError, GraphFormatError,
                        LabeledGraph, Nfa, angle, format_graph, format_nfa, lambda_sets,
                        parse_graph, parse_nfa, trim_nfa)
from conftest import fan_graph, funnel_nfa, loop_branch_nfa, small_graphs, small_nfas


class TestAlphabet:
    def test_order_is_declaration_order(self):
        alph = Alphabet(("z", "a", "m"))
        assert alph.rank("z") < alph.rank("a") < alph.rank("m")

    def test_markers_sort_below_everything(self):
        alph = Alphabet(("a",))
        assert alph.rank(HASH) < alph.rank(AT) < alph.rank("a")

    def test_rejects_markers_and_duplicates(self):
        with pytest.raises(ValueError):
            Alphabet(("a", "a"))
        with pytest.raises(ValueError):
            Alphabet((HASH,))
        with pytest.raises(ValueError):
            Alphabet((AT,))
        with pytest.raises(ValueError):
            Alphabet(("a b",))


class TestParsing:
    def test_fan_example(self):
        g = parse_graph("nodes 3\n0 1 a\n0 2 a\n")
        assert g.n == 3
        assert len(g.edges) == 2

    def test_no_edges(self):
        g = parse_graph("nodes 1\n")
        assert g.n == 1 and not g.edges

    def test_duplicate_edge_lines_collapse(self):
        g = parse_graph("nodes 2\n0 1 a\n0 1 a\n")
        assert len(g.edges) == 1

    def test_comments_and_blanks_ignored(self):
        g = parse_graph("# heading\n\nnodes 2\n# another\n0 1 x\n")
        assert len(g.edges) == 1

    def test_alphabet_line_fixes_order(self):
        g = parse_graph("alphabet b a\nnodes 2\n0 1 a\n1 0 b\n")
        assert g.alphabet.symbols == ("b", "a")

    def test_implicit_alphabet_uses_first_appearance(self):
        g = parse_graph("nodes 2\n0 1 c\n1 0 a\n0 0 c\n")
        assert g.alphabet.symbols == ("c", "a")

    @pytest.mark.parametrize("text", [
        "0 1 a\n",                      # edge before nodes
        "nodes 2\n0 1\n",               # malformed edge
        "nodes 2\nnodes 2\n",           # duplicate nodes
        "alphabet a\nnodes 2\n0 1 b\n",  # unknown symbol
        "nodes 2\n0 5 a\n",             # out of range
        "nodes 2\n0 1 @\n",             # marker label
        "nodes -1\n",
        "nodes 2\ninitial 0\n",         # automaton directive in graph file
    ])
    def test_parse_errors(self, text):
        with pytest.raises(GraphFormatError):
            parse_graph(text)

    def test_nfa_roundtrip(self):
        nfa = loop_branch_nfa()
        again = parse_nfa(format_nfa(nfa))
        assert again == nfa

    def test_nfa_requires_initial_and_final(self):
        with pytest.raises(GraphFormatError):
            parse_nfa("nodes 1\nfinal 0\n")
        with pytest.raises(GraphFormatError):
            parse_nfa("nodes 1\ninitial 0\n")

    @given(small_graphs())
    @settings(max_examples=60)
    def test_format_parse_roundtrip(self, g):
        assert parse_graph(format_graph(g)) == g


class TestLambdaSets:
    def test_fan_unmarked(self):
        assert lambda_sets(fan_graph()) == [
            frozenset({HASH}), frozenset({"a"}), frozenset({"a"})]

    def test_loop_branch_marked(self):
        g = loop_branch_nfa().graph
        assert lambda_sets(g, {0}) == [
            frozenset({AT, "a"}), frozenset({"a"}), frozenset({"b"})]

    def test_isolated_marked_node(self):
        g = LabeledGraph.build(1, [], ["a"])
        assert lambda_sets(g, {0}) == [frozenset({HASH, AT})]

    @given(small_graphs())
    @settings(max_examples=60)
    def test_always_nonempty(self, g):
        marked = set(range(0, g.n, 2))
        assert all(lam for lam in lambda_sets(g, marked))


class TestAngle:
    def test_hash_below_symbols(self):
        alph = Alphabet(("a",))
        assert angle(frozenset({HASH}), frozenset({"a"}), alph)

    def test_equal_singletons_go_both_ways(self):
        alph = Alphabet(("a",))
        s = frozenset({"a"})
        assert angle(s, s, alph) and angle(s, s, alph)

    def test_marker_mixed_set(self):
        alph = Alphabet(("a",))
        assert not angle(frozenset({AT, "a"}), frozenset({AT}), alph)

    @given(small_graphs())
    @settings(max_examples=50)
    def test_transitive_and_antisymmetric_to_singletons(self, g):
        lams = lambda_sets(g, {0} if g.n else set())
        alph = g.alphabet
        for x in lams:
            for y in lams:
                if angle(x, y, alph) and angle(y, x, alph):
                    assert x == y and len(x) == 1
                for z in lams:
                    if angle(x, y, alph) and angle(y, z, alph):
                        assert angle(x, z, alph)


class TestTrim:
    def test_unreachable_state_removed(self):
        g = LabeledGraph.build(3, [(0, 1, "a")], ["a"])
        trimmed, kept = trim_nfa(Nfa(g, 0, frozenset({1})))
        assert trimmed.graph.n == 2 and kept == (0, 1)

    def test_clean_automaton_is_identity(self):
        nfa = loop_branch_nfa()
        trimmed, kept = trim_nfa(nfa)
        assert trimmed == nfa and kept == (0, 1, 2)

    def test_funnel_all_states_live(self):
        nfa = funnel_nfa(3)
        trimmed, kept = trim_nfa(nfa)
        assert trimmed == nfa and kept == tuple(range(6))

    def test_empty_language_raises(self):
        g = LabeledGraph.build(2, [(0, 1, "a")], ["a"])
        with pytest.raises(EmptyLanguageError):
            trim_nfa(Nfa(g, 1, frozenset({0})))

    @given(small_nfas())
    @settings(max_examples=60)
    def test_idempotent(self, nfa):
        try:
            once, _ = trim_nfa(nfa)
        except EmptyLanguageError:
            return
        twice, kept = trim_nfa(once)
        assert twice == once and kept == tuple(range(once.graph.n))
