import pytest

from colexgraph import Index, format_graph, format_nfa, parse_nfa
from colexgraph.cli import main
from conftest import double_hub_graph, funnel_nfa, loop_branch_nfa


@pytest.fixture
def hub_file(tmp_path):
    path = tmp_path / "hub.graph"
    path.write_text(format_graph(double_hub_graph(2)), encoding="utf-8")
    return str(path)


@pytest.fixture
def loop_file(tmp_path):
    path = tmp_path / "loop.nfa"
    path.write_text(format_nfa(loop_branch_nfa()), encoding="utf-8")
    return str(path)


class TestBuildAndQuery:
    def test_build_then_query(self, hub_file, tmp_path, capsys):
        out = str(tmp_path / "hub.clxi")
        assert main(["build", hub_file, "-o", out]) == 0
        assert main(["query", out, "a"]) == 0
        printed = capsys.readouterr().out
        assert "yes" in printed and "end-nodes 0 1" in printed

    def test_no_match_exits_one(self, hub_file, tmp_path, capsys):
        out = str(tmp_path / "hub.clxi")
        main(["build", hub_file, "-o", out])
        assert main(["query", out, "aa"]) == 1
        assert "no" in capsys.readouterr().out

    def test_empty_pattern_matches_nonempty_graph(self, hub_file, tmp_path):
        out = str(tmp_path / "hub.clxi")
        main(["build", hub_file, "-o", out])
        assert main(["query", out, ""]) == 0

    def test_marker_pattern_is_an_error(self, hub_file, tmp_path, capsys):
        out = str(tmp_path / "hub.clxi")
        main(["build", hub_file, "-o", out])
        assert main(["query", out, "@"]) == 2
        assert "error" in capsys.readouterr().err

    def test_missing_file_is_an_error(self, tmp_path):
        assert main(["build", str(tmp_path / "nope"), "-o", str(tmp_path / "x")]) == 2

    def test_malformed_graph_is_an_error(self, tmp_path):
        bad = tmp_path / "bad.graph"
        bad.write_text("nodes 2\n0 1\n", encoding="utf-8")
        assert main(["build", str(bad), "-o", str(tmp_path / "x")]) == 2

    def test_querying_a_non_index_file_is_an_error(self, hub_file, capsys):
        assert main(["query", hub_file, "a"]) == 2
        assert "error" in capsys.readouterr().err

    def test_truncated_index_is_an_error(self, hub_file, tmp_path, capsys):
        out = tmp_path / "hub.clxi"
        main(["build", hub_file, "-o", str(out)])
        out.write_bytes(out.read_bytes()[:10])
        assert main(["query", str(out), "a"]) == 2
        assert "error" in capsys.readouterr().err

    def test_saved_index_answers_like_in_memory(self, loop_file, tmp_path):
        out = str(tmp_path / "loop.clxi")
        main(["build", loop_file, "-o", out, "--nfa", "--mark-initial"])
        from helpers import nfa_pipeline
        from colexgraph import build_nfa_index
        qn, cp = nfa_pipeline(loop_branch_nfa())
        mem = build_nfa_index(qn, cp)
        disk = Index.load(out)
        for p in ("", "a", "ab", "aab", "b", "aaab"):
            syms = list(p)
            assert disk.accept(syms) == mem.accept(syms)
            assert disk.match_pattern(syms) == mem.match_pattern(syms)


class TestAccept:
    def test_accept_and_reject(self, loop_file, tmp_path, capsys):
        out = str(tmp_path / "loop.clxi")
        assert main(["build", loop_file, "-o", out, "--nfa", "--mark-initial"]) == 0
        assert main(["accept", out, "ab"]) == 0
        assert "accept" in capsys.readouterr().out
        assert main(["accept", out, "b"]) == 1

    def test_accept_needs_automaton_index(self, hub_file, tmp_path):
        out = str(tmp_path / "hub.clxi")
        main(["build", hub_file, "-o", out])
        assert main(["accept", out, "a"]) == 2

    def test_accept_needs_marker(self, tmp_path):
        # Funnel quotients cleanly even without the marker, but acceptance
        # must still refuse to answer on the unmarked index.
        path = tmp_path / "funnel.nfa"
        path.write_text(format_nfa(funnel_nfa(2)), encoding="utf-8")
        out = str(tmp_path / "funnel.clxi")
        assert main(["build", str(path), "-o", out, "--nfa"]) == 0
        assert main(["accept", out, "aa"]) == 2

    def test_mark_initial_requires_nfa(self, hub_file, tmp_path):
        assert main(["build", hub_file, "-o", str(tmp_path / "x"), "--mark-initial"]) == 2


class TestStats:
    def test_stats_on_graph_file(self, hub_file, capsys):
        assert main(["stats", hub_file]) == 0
        out = capsys.readouterr().out
        assert "n 4" in out
        assert "edges 4" in out
        assert "classes 2" in out
        assert "quotient-edges 1" in out
        assert "width 1" in out

    def test_stats_on_index_file(self, hub_file, tmp_path, capsys):
        out = str(tmp_path / "hub.clxi")
        main(["build", hub_file, "-o", out])
        capsys.readouterr()
        assert main(["stats", out]) == 0
        assert "width 1" in capsys.readouterr().out

    def test_tsv_format(self, hub_file, capsys):
        assert main(["stats", hub_file, "--format", "tsv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        header, values = (line.split("\t") for line in lines)
        assert len(header) == len(values)
        assert header[0] == "n" and values[0] == "4"


class TestQuotientCommand:
    def test_emits_classes_and_reparses(self, loop_file, capsys):
        assert main(["quotient", loop_file, "--nfa", "--mark-initial"]) == 0
        out = capsys.readouterr().out
        assert "# class 0: 0" in out
        reparsed = parse_nfa(out)
        assert reparsed.graph.n == 3

    def test_unmarked_collapse(self, tmp_path, capsys):
        g = double_hub_graph(3)
        path = tmp_path / "hub.graph"
        path.write_text(format_graph(g), encoding="utf-8")
        assert main(["quotient", str(path)]) == 0
        out = capsys.readouterr().out
        assert "nodes 2" in out
        assert "# class 0: 0 1 2" in out
        assert "# class 1: 3 4" in out

    def test_output_file(self, loop_file, tmp_path):
        dest = tmp_path / "q.nfa"
        assert main(["quotient", loop_file, "--nfa", "--mark-initial",
                     "-o", str(dest)]) == 0
        assert dest.exists() and "initial" in dest.read_text(encoding="utf-8")


class TestVerify:
    def test_graph_checks_pass(self, hub_file, capsys):
        assert main(["verify", hub_file]) == 0
        out = capsys.readouterr().out
        assert "CHECK max-relation-axioms PASS" in out
        assert "CHECK pattern-oracle PASS" in out
        assert "FAIL" not in out

    def test_nfa_checks_pass(self, loop_file, capsys):
        assert main(["verify", loop_file]) == 0
        out = capsys.readouterr().out
        assert "CHECK accept-oracle PASS" in out
        assert "CHECK powerset-bounds PASS" in out
        assert "CHECK language-quotient-equal PASS" in out

    def test_dump_relation(self, hub_file, tmp_path, capsys):
        dest = tmp_path / "rel.txt"
        assert main(["verify", hub_file, "--dump-relation", str(dest)]) == 0
        capsys.readouterr()
        lines = dest.read_text(encoding="utf-8").splitlines()
        # strict pairs of the two-hub maximum relation: 2 + 4 + 2
        assert len(lines) == 8
        assert all(len(line.split()) == 2 for line in lines)
        assert lines == sorted(lines, key=lambda s: tuple(map(int, s.split())))
