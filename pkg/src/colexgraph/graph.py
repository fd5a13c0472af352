"""Edge-labeled graphs, automata, label sets and the text format.

Nodes are dense integers 0..n-1. Edges are (source, target, label) triples over
a totally ordered alphabet of user symbols. Two reserved marker labels exist
only inside the library: HASH marks nodes with no incoming edge and AT marks
nodes of a caller-chosen distinguished set; both sort before every user symbol
(HASH before AT). Markers never appear in input files or query patterns.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

HASH = "#"
AT = "@"

MARKERS = (HASH, AT)


class GraphFormatError(ValueError):
    """Malformed graph/automaton text input."""


class EmptyLanguageError(ValueError):
    """Trimming removed the initial state: the automaton accepts nothing."""


@dataclass(frozen=True)
class Alphabet:
    """Totally ordered user symbols; list position is the order.

    The extended order used everywhere is HASH < AT < symbols[0] < symbols[1] < ...
    """

    symbols: tuple[str, ...]

    def __post_init__(self):
        seen = set()
        for s in self.symbols:
            if not s or s in MARKERS or any(c.isspace() for c in s) or s.startswith(HASH):
                raise ValueError(f"invalid alphabet symbol {s!r}")
            if s in seen:
                raise ValueError(f"duplicate alphabet symbol {s!r}")
            seen.add(s)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index

    def index(self, symbol: str) -> int:
        """0-based position of a user symbol."""
        try:
            return self._index[symbol]
        except KeyError:
            raise KeyError(f"unknown symbol {symbol!r}") from None

    def rank(self, symbol: str) -> int:
        """Position in the extended order: HASH=0, AT=1, user symbol i = i+2."""
        if symbol == HASH:
            return 0
        if symbol == AT:
            return 1
        return self._index[symbol] + 2


@dataclass(frozen=True)
class LabeledGraph:
    """Finite edge-labeled graph: nodes 0..n-1, a set of labeled edge triples."""

    n: int
    edges: frozenset[tuple[int, int, str]]
    alphabet: Alphabet

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("node count must be non-negative")
        for u, v, a in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v},{a!r}) out of node range 0..{self.n - 1}")
            if a not in self.alphabet:
                raise ValueError(f"edge label {a!r} is not a user symbol")

    @classmethod
    def build(cls, n: int, edges: Iterable[tuple[int, int, str]],
              alphabet: Alphabet | Iterable[str]) -> "LabeledGraph":
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(tuple(alphabet))
        return cls(n, frozenset(edges), alphabet)

    def sorted_edges(self) -> list[tuple[int, int, str]]:
        return sorted(self.edges, key=lambda e: (e[0], e[1], self.alphabet.index(e[2])))

    def in_adjacency(self) -> list[dict[str, tuple[int, ...]]]:
        """Per node: label -> sorted tuple of sources. Cached."""
        cached = getattr(self, "_in_adj", None)
        if cached is None:
            buckets: list[dict[str, list[int]]] = [{} for _ in range(self.n)]
            for u, v, a in self.edges:
                buckets[v].setdefault(a, []).append(u)
            cached = [{a: tuple(sorted(us)) for a, us in sorted(b.items())} for b in buckets]
            object.__setattr__(self, "_in_adj", cached)
        return cached

    def out_adjacency(self) -> list[dict[str, tuple[int, ...]]]:
        """Per node: label -> sorted tuple of targets. Cached."""
        cached = getattr(self, "_out_adj", None)
        if cached is None:
            buckets: list[dict[str, list[int]]] = [{} for _ in range(self.n)]
            for u, v, a in self.edges:
                buckets[u].setdefault(a, []).append(v)
            cached = [{a: tuple(sorted(vs)) for a, vs in sorted(b.items())} for b in buckets]
            object.__setattr__(self, "_out_adj", cached)
        return cached


@dataclass(frozen=True)
class Nfa:
    """Automaton view of a labeled graph: one initial state, a set of finals."""

    graph: LabeledGraph
    initial: int
    finals: frozenset[int]

    def __post_init__(self):
        n = self.graph.n
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        if any(not 0 <= f < n for f in self.finals):
            raise ValueError("final state out of range")


def lambda_sets(g: LabeledGraph, u_marked: Iterable[int] = ()) -> list[frozenset[str]]:
    """Label set of every node: incoming labels, or {HASH} when there are none.

    Nodes in u_marked additionally carry AT. Every returned set is nonempty.
    """
    marked = set(u_marked)
    for v in marked:
        if not 0 <= v < g.n:
            raise ValueError(f"marked node {v} out of range")
    incoming = g.in_adjacency()
    out = []
    for v in range(g.n):
        labels = set(incoming[v])
        if not labels:
            labels = {HASH}
        if v in marked:
            labels.add(AT)
        out.append(frozenset(labels))
    return out


def angle(a: frozenset[str], b: frozenset[str], alph: Alphabet) -> bool:
    """Label-set dominance: every symbol of a precedes-or-equals every symbol of b.

    Equivalent to max(a) <= min(b) in the extended order, so constant time once
    the extremes are known.
    """
    if not a or not b:
        raise ValueError("label sets must be nonempty")
    return max(alph.rank(x) for x in a) <= min(alph.rank(y) for y in b)


def trim_nfa(a: Nfa) -> tuple[Nfa, tuple[int, ...]]:
    """Restrict to states reachable from the initial and co-reachable to a final.

    Returns the trimmed automaton and the kept-state map: kept[new_id] = old_id.
    Raises EmptyLanguageError when the initial state itself would be removed.
    """
    g = a.graph
    out_adj = g.out_adjacency()
    reach = {a.initial}
    dq = deque([a.initial])
    while dq:
        u = dq.popleft()
        for targets in out_adj[u].values():
            for v in targets:
                if v not in reach:
                    reach.add(v)
                    dq.append(v)
    in_adj = g.in_adjacency()
    coreach = set(a.finals)
    dq = deque(coreach)
    while dq:
        v = dq.popleft()
        for sources in in_adj[v].values():
            for u in sources:
                if u not in coreach:
                    coreach.add(u)
                    dq.append(u)
    kept = tuple(sorted(reach & coreach))
    if a.initial not in kept:
        raise EmptyLanguageError("initial state is not co-reachable to any final state")
    renum = {old: new for new, old in enumerate(kept)}
    keep = set(kept)
    edges = frozenset((renum[u], renum[v], s) for u, v, s in g.edges if u in keep and v in keep)
    graph = LabeledGraph(len(kept), edges, g.alphabet)
    finals = frozenset(renum[f] for f in a.finals if f in keep)
    return Nfa(graph, renum[a.initial], finals), kept


def _parse(text: str, *, automaton: bool):
    n = None
    explicit_alphabet: tuple[str, ...] | None = None
    implicit: dict[str, None] = {}
    edges: set[tuple[int, int, str]] = set()
    initial = None
    finals: set[int] | None = None

    def node(tok: str, lineno: int) -> int:
        try:
            i = int(tok)
        except ValueError:
            raise GraphFormatError(f"line {lineno}: expected a node index, got {tok!r}") from None
        if n is None:
            raise GraphFormatError(f"line {lineno}: 'nodes' line must come first")
        if not 0 <= i < n:
            raise GraphFormatError(f"line {lineno}: node {i} out of declared range 0..{n - 1}")
        return i

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(HASH):
            continue
        parts = line.split()
        head = parts[0]
        if head == "alphabet":
            if explicit_alphabet is not None:
                raise GraphFormatError(f"line {lineno}: duplicate alphabet line")
            if edges:
                raise GraphFormatError(f"line {lineno}: alphabet line must precede edges")
            if len(parts) < 2:
                raise GraphFormatError(f"line {lineno}: empty alphabet")
            try:
                explicit_alphabet = tuple(Alphabet(tuple(parts[1:])).symbols)
            except ValueError as e:
                raise GraphFormatError(f"line {lineno}: {e}") from None
        elif head == "nodes":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: duplicate nodes line")
            if len(parts) != 2:
                raise GraphFormatError(f"line {lineno}: expected 'nodes <count>'")
            try:
                n = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad node count {parts[1]!r}") from None
            if n < 0:
                raise GraphFormatError(f"line {lineno}: negative node count")
        elif head == "initial":
            if not automaton:
                raise GraphFormatError(f"line {lineno}: 'initial' is only valid in an automaton file")
            if initial is not None:
                raise GraphFormatError(f"line {lineno}: duplicate initial line")
            if len(parts) != 2:
                raise GraphFormatError(f"line {lineno}: expected 'initial <state>'")
            initial = node(parts[1], lineno)
        elif head == "final":
            if not automaton:
                raise GraphFormatError(f"line {lineno}: 'final' is only valid in an automaton file")
            if finals is not None:
                raise GraphFormatError(f"line {lineno}: duplicate final line")
            finals = {node(t, lineno) for t in parts[1:]}
        else:
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: expected '<src> <dst> <label>'")
            u = node(parts[0], lineno)
            v = node(parts[1], lineno)
            label = parts[2]
            if label in MARKERS:
                raise GraphFormatError(f"line {lineno}: marker {label!r} cannot be an edge label")
            if explicit_alphabet is not None:
                if label not in explicit_alphabet:
                    raise GraphFormatError(f"line {lineno}: unknown symbol {label!r}")
            else:
                implicit.setdefault(label, None)
            edges.add((u, v, label))

    if n is None:
        raise GraphFormatError("missing 'nodes' line")
    symbols = explicit_alphabet if explicit_alphabet is not None else tuple(implicit)
    try:
        alphabet = Alphabet(symbols)
    except ValueError as e:
        raise GraphFormatError(str(e)) from None
    graph = LabeledGraph(n, frozenset(edges), alphabet)
    if automaton:
        if initial is None:
            raise GraphFormatError("missing 'initial' line")
        if finals is None:
            raise GraphFormatError("missing 'final' line")
        return Nfa(graph, initial, frozenset(finals))
    return graph


def parse_graph(text: str) -> LabeledGraph:
    """Parse the edge-list text format.

    Format: optional ``alphabet a b c``, a ``nodes <n>`` line, then one edge per
    line ``<src> <dst> <label>``. Lines starting with ``#`` are comments.
    Duplicate edge lines collapse to one edge. Without an alphabet line, symbol
    order is the order of first appearance.
    """
    return _parse(text, automaton=False)


def parse_nfa(text: str) -> Nfa:
    """Parse an automaton file: the graph format plus ``initial`` and ``final`` lines."""
    return _parse(text, automaton=True)


def format_graph(g: LabeledGraph, header_comments: Iterable[str] = ()) -> str:
    lines = [f"{HASH} {c}" for c in header_comments]
    if g.alphabet.symbols:
        lines.append("alphabet " + " ".join(g.alphabet.symbols))
    lines.append(f"nodes {g.n}")
    lines.extend(f"{u} {v} {a}" for u, v, a in g.sorted_edges())
    return "\n".join(lines) + "\n"


def format_nfa(a: Nfa, header_comments: Iterable[str] = ()) -> str:
    body = format_graph(a.graph, header_comments)
    lines = [body.rstrip("\n"), f"initial {a.initial}",
             "final" + "".join(f" {f}" for f in sorted(a.finals))]
    return "\n".join(lines) + "\n"
